// Certified arithmetic: enclosure contracts, the decide_leq tiers, and
// agreement with exact arithmetic. Expected decimal values were computed
// beforehand with an independent 60-digit reference evaluation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <random>

#include "gapcert/certnum.hpp"

using namespace gapcert;
using namespace gapcert::certnum;

namespace {

// Exact rational q from a decimal string "d.ddd..." (no exponent).
mpq_class decimal(const std::string& s) {
  const auto dot = s.find('.');
  std::string digits = s;
  std::size_t frac = 0;
  if (dot != std::string::npos) {
    frac = s.size() - dot - 1;
    digits.erase(dot, 1);
  }
  mpq_class q(mpz_class(digits, 10), 1);
  mpz_class den;
  mpz_ui_pow_ui(den.get_mpz_t(), 10, frac);
  q /= mpq_class(den);
  q.canonicalize();
  return q;
}

}  // namespace

TEST_CASE("certified_ln encloses the true logarithm") {
  // ln 1 = 0 exactly
  const CertifiedValue one = certified_ln(std::uint64_t{1});
  CHECK(one.contains(mpq_class(0)));
  CHECK(one.width_upper() == 0.0);

  // 40-digit reference values
  const mpq_class ln2 = decimal("0.6931471805599453094172321214581765680755");
  const mpq_class ln89 = decimal("4.488636369732139838317815540669849219405");

  const CertifiedValue a = certified_ln(std::uint64_t{2});
  CHECK(a.contains(ln2));
  CHECK(a.width_upper() <= 1e-12);

  const CertifiedValue b = certified_ln(std::uint64_t{89});
  CHECK(b.contains(ln89));
  CHECK(b.width_upper() <= 1e-12);

  const CertifiedValue c = certified_ln(mpq_class(1, 2));
  CHECK(c.contains(-ln2));
}

TEST_CASE("certified_ln width contract across precisions") {
  for (const mpfr_prec_t prec : {64, 128, 256, 512}) {
    for (const std::uint64_t x : {2ull, 89ull, 1327ull, 18361375334787046697ull}) {
      const CertifiedValue v = certified_ln(x, prec);
      // width <= 2^(1-prec) * |ln x|, and hi is an upper bound on |ln x|
      const double bound = std::ldexp(v.hi_double(), 1 - static_cast<int>(prec));
      CHECK(v.width_upper() <= bound);
    }
  }
}

TEST_CASE("certified_ln domain errors") {
  CHECK_THROWS_AS(certified_ln(std::uint64_t{0}), DomainError);
  CHECK_THROWS_AS(certified_ln(mpq_class(-3, 2)), DomainError);
  CHECK_THROWS_AS(certified_ln(mpq_class(0)), DomainError);
}

TEST_CASE("precision nesting: enclosures shrink as precision grows") {
  const Expr n = Expr::integer(1327);
  const Expr f = (Expr::ln(n * Expr::ln(n)) - Expr::integer(1)) * Expr::ln(n * Expr::ln(n));
  CertifiedValue prev = f.eval_certified(64);
  for (const mpfr_prec_t prec : {128, 256, 512, 1024}) {
    const CertifiedValue next = f.eval_certified(prec);
    CHECK(prev.encloses(next));
    prev = next;
  }
}

TEST_CASE("decide_leq detects exact log identities") {
  // ln 4 = 2 ln 2
  const Decision d1 = decide_leq(Expr::ln(Expr::integer(4)), Expr::integer(2) * Expr::ln(Expr::integer(2)));
  CHECK(d1.outcome == LeqOutcome::kHolds);
  CHECK(d1.precision_used == kPrecisionExact);
  // and in the other direction, since the values are equal
  const Decision d2 = decide_leq(Expr::integer(2) * Expr::ln(Expr::integer(2)), Expr::ln(Expr::integer(4)));
  CHECK(d2.outcome == LeqOutcome::kHolds);

  // ln(9/4) = 2 (ln 3 - ln 2)
  const Expr lhs = Expr::ln(Expr::rational(9, 4));
  const Expr rhs = Expr::integer(2) * (Expr::ln(Expr::integer(3)) - Expr::ln(Expr::integer(2)));
  CHECK(decide_leq(lhs, rhs).outcome == LeqOutcome::kHolds);
  CHECK(decide_leq(rhs, lhs).outcome == LeqOutcome::kHolds);
}

TEST_CASE("decide_leq separates comfortably-split logarithmic expressions") {
  // 3 (ln 11 - ln 7) <= ln 7, settled by the double tier
  const Expr lhs = Expr::integer(3) * (Expr::ln(Expr::integer(11)) - Expr::ln(Expr::integer(7)));
  const Expr rhs = Expr::ln(Expr::integer(7));
  const Decision d = decide_leq(lhs, rhs);
  CHECK(d.outcome == LeqOutcome::kHolds);
  CHECK(d.precision_used == kPrecisionDoubleTier);
  CHECK(decide_leq(rhs, lhs).outcome == LeqOutcome::kFails);

  // full n = 4 ratio check: 4 ln 11 <= 5 ln 7 (11^4 = 14641 <= 7^5 = 16807)
  CHECK(decide_leq(Expr::integer(4) * Expr::ln(Expr::integer(11)),
                   Expr::integer(5) * Expr::ln(Expr::integer(7)))
            .outcome == LeqOutcome::kHolds);
}

TEST_CASE("ln of a non-positive subexpression is a domain error") {
  // ln(1 * ln 1) = ln 0
  CHECK_THROWS_AS(Expr::ln(Expr::integer(1) * Expr::ln(Expr::integer(1))), DomainError);
  CHECK_THROWS_AS(Expr::ln(Expr::integer(0)), DomainError);
  CHECK_THROWS_AS(Expr::integer(1) / (Expr::integer(1) - Expr::integer(1)), DomainError);
}

TEST_CASE("decide_leq escalates near ties and stays exact") {
  // ln(2^60 + 1) vs 60 ln 2: separated by ~8.7e-19, beyond the double tier.
  const std::uint64_t big = (std::uint64_t{1} << 60) + 1;
  const Expr lhs = Expr::ln(Expr::integer(big));
  const Expr rhs = Expr::integer(60) * Expr::ln(Expr::integer(2));
  const Decision d = decide_leq(lhs, rhs);
  CHECK(d.outcome == LeqOutcome::kFails);
  CHECK(d.precision_used == kPrecisionExact);
  CHECK(decide_leq(rhs, lhs).outcome == LeqOutcome::kHolds);

  // The same comparison wrapped in an outer ln forces the interval tier.
  const Decision nested = decide_leq(Expr::ln(lhs), Expr::ln(rhs));
  CHECK(nested.outcome == LeqOutcome::kFails);
  CHECK(nested.precision_used >= 128);
}

TEST_CASE("decide_leq raises UndecidableError on a symbolic blind spot") {
  // ln(ln 4) equals ln(2 ln 2) exactly, but neither side is linear in
  // logarithms of rationals, so enclosures can never separate.
  const Expr lhs = Expr::ln(Expr::ln(Expr::integer(4)));
  const Expr rhs = Expr::ln(Expr::integer(2) * Expr::ln(Expr::integer(2)));
  CHECK_THROWS_AS(decide_leq(lhs, rhs, 512), UndecidableError);
}

TEST_CASE("decide_leq is deterministic") {
  const Expr lhs = Expr::integer(24) * (Expr::ln(Expr::integer(97)) - Expr::ln(Expr::integer(89)));
  const Expr rhs = Expr::ln(Expr::integer(24)) + Expr::ln(Expr::ln(Expr::integer(24)));
  const Decision first = decide_leq(lhs, rhs);
  for (int i = 0; i < 10; ++i) CHECK(decide_leq(lhs, rhs) == first);
}

TEST_CASE("exact_pow_leq examples") {
  CHECK(exact_pow_leq(3, 1, 2, 2));       // 3 <= 4
  CHECK(exact_pow_leq(11, 4, 7, 5));      // 14641 <= 16807
  CHECK(exact_pow_leq(2, 10, 2, 10));     // equality
  CHECK_FALSE(exact_pow_leq(2, 2, 3, 1)); // 4 > 3
  CHECK(exact_pow_leq(1, 50, 2, 1));
  // forced past the bit-length early exit: 3^400 vs 2^634 differ late
  CHECK(exact_pow_leq(mpz_class(3), 400, mpz_class(2), 634));
  CHECK_FALSE(exact_pow_leq(mpz_class(2), 634, mpz_class(3), 400));
}

TEST_CASE("exact_pow_leq agrees with the certified log path") {
  std::mt19937_64 rng(0x5eed5eedULL);
  std::uniform_int_distribution<std::uint64_t> base(2, 1'000'000);
  std::uniform_int_distribution<std::uint64_t> expo(1, 50);
  for (int i = 0; i < 10'000; ++i) {
    const std::uint64_t a = base(rng), b = base(rng);
    const std::uint64_t ea = expo(rng), eb = expo(rng);
    const bool exact = exact_pow_leq(a, ea, b, eb);
    const Decision log_path = decide_leq(Expr::integer(ea) * Expr::ln(Expr::integer(a)),
                                         Expr::integer(eb) * Expr::ln(Expr::integer(b)));
    CAPTURE(a, ea, b, eb);
    REQUIRE(exact == log_path.holds());
  }
}

namespace {

// Test-side exact evaluator, independent of the library's normalization.
struct RatExpr {
  mpq_class value;
};

RatExpr random_rat_expr(std::mt19937_64& rng, Expr& built, int depth) {
  std::uniform_int_distribution<int> leaf(-50, 50);
  std::uniform_int_distribution<int> op(0, 3);
  if (depth == 0 || std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
    const int num = leaf(rng);
    const int den = std::uniform_int_distribution<int>(1, 20)(rng);
    built = Expr::rational(num, den);
    mpq_class q(num, den);
    q.canonicalize();
    return {q};
  }
  Expr lb = Expr::integer(0), rb = Expr::integer(0);
  const RatExpr l = random_rat_expr(rng, lb, depth - 1);
  const RatExpr r = random_rat_expr(rng, rb, depth - 1);
  switch (op(rng)) {
    case 0: built = lb + rb; return {l.value + r.value};
    case 1: built = lb - rb; return {l.value - r.value};
    case 2: built = lb * rb; return {l.value * r.value};
    default:
      if (r.value == 0) {
        built = lb + rb;
        return {l.value + r.value};
      }
      built = lb / rb;
      return {l.value / r.value};
  }
}

}  // namespace

TEST_CASE("soundness: decide_leq matches exact rational evaluation on ln-free input") {
  std::mt19937_64 rng(0xfeedc0deULL);
  int ties = 0;
  for (int i = 0; i < 100'000; ++i) {
    Expr lhs = Expr::integer(0), rhs = Expr::integer(0);
    const RatExpr l = random_rat_expr(rng, lhs, 3);
    RatExpr r{};
    if (i % 17 == 0) {
      // exact tie through a different tree shape
      rhs = (lhs + lhs) / Expr::integer(2);
      r.value = l.value;
      ++ties;
    } else {
      r = random_rat_expr(rng, rhs, 3);
    }
    const bool expected = l.value <= r.value;
    const Decision d = decide_leq(lhs, rhs);
    REQUIRE(d.holds() == expected);
  }
  CHECK(ties > 1000);
}
