#pragma once

// Decision kernel for inequalities between expressions built from integers,
// rationals, ln and integer powers. Three tiers:
//
//   1. double-interval evaluation; decides when the enclosures separate.
//   2. exact symbolic reduction: expressions linear in logarithms reduce to
//      canonical prime-factorized form, where ties are detected exactly and
//      pure-logarithm comparisons reduce to exact integer power comparisons.
//   3. MPFR interval evaluation with doubling precision up to a cap.
//
// A decision is only ever produced from separated enclosures or an exact
// reduction; overlapping enclosures at the precision cap raise
// UndecidableError instead of guessing.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gapcert/expr.hpp"
#include "gapcert/interval.hpp"

namespace gapcert::certnum {

enum class LeqOutcome { kHolds, kFails };

struct Decision {
  LeqOutcome outcome;
  // 53 = double fast path, 64 = exact rational/integer reduction,
  // >= 128 = MPFR interval precision at which the enclosures separated.
  unsigned precision_used;

  bool holds() const { return outcome == LeqOutcome::kHolds; }
  friend bool operator==(const Decision&, const Decision&) = default;
};

inline constexpr unsigned kPrecisionDoubleTier = 53;
inline constexpr unsigned kPrecisionExact = 64;

// True iff a^ea <= b^eb, by exact integer arithmetic. Bit-length bounds give
// an early exit; otherwise the powers are computed outright.
inline bool exact_pow_leq(const mpz_class& a, unsigned long ea, const mpz_class& b, unsigned long eb) {
  if (sgn(a) < 1 || sgn(b) < 1 || ea == 0 || eb == 0) throw DomainError("exact_pow_leq requires a,b >= 1 and exponents >= 1");
  // bitlen(x^e) in [e*(bitlen(x)-1) + 1, e*bitlen(x)]
  using u128 = unsigned __int128;
  const u128 la = mpz_sizeinbase(a.get_mpz_t(), 2);
  const u128 lb = mpz_sizeinbase(b.get_mpz_t(), 2);
  const u128 a_min = ea * (la - 1) + 1, a_max = ea * la;
  const u128 b_min = eb * (lb - 1) + 1, b_max = eb * lb;
  if (a_max < b_min) return true;
  if (a_min > b_max) return false;
  mpz_class pa, pb;
  mpz_pow_ui(pa.get_mpz_t(), a.get_mpz_t(), ea);
  mpz_pow_ui(pb.get_mpz_t(), b.get_mpz_t(), eb);
  return pa <= pb;
}

inline bool exact_pow_leq(std::uint64_t a, std::uint64_t ea, std::uint64_t b, std::uint64_t eb) {
  return exact_pow_leq(mpz_class(static_cast<unsigned long>(a)), static_cast<unsigned long>(ea),
                       mpz_class(static_cast<unsigned long>(b)), static_cast<unsigned long>(eb));
}

namespace detail {

// Decides sum coeff_p * ln(p) <= 0 exactly, by clearing denominators and
// comparing the positive- and negative-exponent prime products as integers.
// Returns nullopt when the cleared exponents are too large to materialize.
inline std::optional<bool> pure_log_leq_zero(const std::map<std::uint64_t, mpq_class>& coeffs) {
  mpz_class lcm(1);
  for (const auto& [p, c] : coeffs) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den().get_mpz_t());
  mpz_class product_bits(0);
  std::vector<std::pair<std::uint64_t, mpz_class>> cleared;
  for (const auto& [p, c] : coeffs) {
    mpz_class e = c.get_num() * (lcm / c.get_den());
    if (e == 0) continue;
    cleared.emplace_back(p, e);
    product_bits += 64 * abs(e);
  }
  // Refuse absurd blowups; the interval tier takes over in that case.
  if (product_bits > 1'000'000'000) return std::nullopt;
  mpz_class pos(1), neg(1), t;
  for (const auto& [p, e] : cleared) {
    if (!e.fits_ulong_p() && !mpz_class(-e).fits_ulong_p()) return std::nullopt;
    if (e > 0) {
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(p), e.get_ui());
      pos *= t;
    } else {
      mpz_class mag = -e;
      mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(p), mag.get_ui());
      neg *= t;
    }
  }
  return pos <= neg;
}

}  // namespace detail

// Decides lhs <= rhs with a guarantee of no misdecision. Equal values decide
// as kHolds. Throws DomainError for provably out-of-domain subexpressions and
// UndecidableError when max_precision is exhausted with overlapping
// enclosures and no exact reduction applies.
inline Decision decide_leq(const Expr& lhs, const Expr& rhs, unsigned max_precision = kDefaultMaxPrecisionBits) {
  // Tier 1: hardware doubles.
  try {
    const DoubleInterval a = lhs.eval_double();
    const DoubleInterval b = rhs.eval_double();
    if (certainly_leq(a, b)) return {LeqOutcome::kHolds, kPrecisionDoubleTier};
    if (certainly_gt(a, b)) return {LeqOutcome::kFails, kPrecisionDoubleTier};
  } catch (const Indeterminate&) {
    // enclosure too wide at 53 bits; fall through
  }

  // Tier 2: exact symbolic reduction of lhs - rhs.
  const auto la = lhs.normalize_linear();
  const auto lb = rhs.normalize_linear();
  if (la && lb) {
    Expr::LinearLnForm diff = *la;
    for (const auto& [p, c] : lb->log_coeffs) {
      auto& coeff = diff.log_coeffs[p];
      coeff -= c;
      if (coeff == 0) diff.log_coeffs.erase(p);
    }
    diff.constant -= lb->constant;
    if (diff.log_free()) {
      return {diff.constant <= 0 ? LeqOutcome::kHolds : LeqOutcome::kFails, kPrecisionExact};
    }
    if (diff.constant == 0) {
      if (auto r = detail::pure_log_leq_zero(diff.log_coeffs)) {
        return {*r ? LeqOutcome::kHolds : LeqOutcome::kFails, kPrecisionExact};
      }
    }
    // Mixed constant + logarithm form: no exact route; intervals must separate.
  }

  // Tier 3: MPFR intervals with doubling precision.
  max_precision = std::max(max_precision, 8u);
  for (unsigned prec = std::min(128u, max_precision);; prec = std::min(prec * 2, max_precision)) {
    try {
      const CertifiedValue a = lhs.eval_certified(prec);
      const CertifiedValue b = rhs.eval_certified(prec);
      if (certainly_leq(a, b)) return {LeqOutcome::kHolds, prec};
      if (certainly_gt(a, b)) return {LeqOutcome::kFails, prec};
    } catch (const Indeterminate&) {
      // widen precision and retry
    }
    if (prec >= max_precision) break;
  }
  throw UndecidableError("enclosures still overlap at the precision cap");
}

}  // namespace gapcert::certnum
