#pragma once

// 64-bit primality testing and factorization: deterministic Miller-Rabin
// (exact for the full uint64 range with the 12-prime base set) plus
// Brent-cycle Pollard rho for composites.

#include <cstdint>
#include <map>
#include <numeric>

namespace gapcert {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t acc = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1) acc = mulmod_u64(acc, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return acc;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Sufficient witness set for every n < 3.3e24 (Sorenson & Webster).
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod_u64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod_u64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

namespace detail {

inline std::uint64_t pollard_rho_u64(std::uint64_t n) {
  // Brent's variant; n must be odd, composite, and not a perfect power of a
  // small prime already stripped by trial division.
  for (std::uint64_t c = 1;; ++c) {
    auto step = [n, c](std::uint64_t x) {
      return static_cast<std::uint64_t>((static_cast<unsigned __int128>(mulmod_u64(x, x, n)) + c) % n);
    };
    std::uint64_t x = 2, y = 2, d = 1;
    std::uint64_t saved_y = y;
    for (std::uint64_t limit = 1; d == 1; limit *= 2) {
      x = y;
      for (std::uint64_t i = 0; i < limit && d == 1; i += 128) {
        saved_y = y;
        std::uint64_t acc = 1;
        std::uint64_t steps = std::min<std::uint64_t>(128, limit - i);
        for (std::uint64_t j = 0; j < steps; ++j) {
          y = step(y);
          acc = mulmod_u64(acc, x > y ? x - y : y - x, n);
        }
        d = std::gcd(acc, n);
      }
    }
    if (d != n) return d;
    // Batch overshot a factor; replay one step at a time.
    y = saved_y;
    d = 1;
    while (d == 1) {
      y = step(y);
      d = std::gcd(x > y ? x - y : y - x, n);
    }
    if (d != n) return d;
  }
}

inline void factorize_into(std::uint64_t n, std::map<std::uint64_t, unsigned>& out) {
  if (n < 2) return;
  if (is_prime_u64(n)) {
    ++out[n];
    return;
  }
  std::uint64_t d = pollard_rho_u64(n);
  factorize_into(d, out);
  factorize_into(n / d, out);
}

}  // namespace detail

// Prime factorization of n as {prime -> multiplicity}; empty for n <= 1.
inline std::map<std::uint64_t, unsigned> factorize_u64(std::uint64_t n) {
  std::map<std::uint64_t, unsigned> out;
  for (std::uint64_t p : {2ull, 3ull, 5ull}) {
    while (n % p == 0) {
      ++out[p];
      n /= p;
    }
  }
  detail::factorize_into(n, out);
  return out;
}

}  // namespace gapcert
