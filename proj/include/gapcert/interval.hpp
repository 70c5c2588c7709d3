#pragma once

// Two layers of enclosure arithmetic used to decide inequalities without
// floating-point misdecisions:
//
//   DoubleInterval  -- hardware doubles with outward rounding steps; the
//                      cheap first tier. Transcendental endpoints are widened
//                      past the documented libm error bound.
//   CertifiedValue  -- MPFR intervals with directed rounding at an explicit
//                      working precision; the escalation tier. Every endpoint
//                      is rounded away from the enclosed value, so the exact
//                      value of the represented expression always lies in
//                      [lo, hi], and widening the precision never widens the
//                      enclosure.
//
// Both layers signal "provably outside the domain" (DomainError) separately
// from "enclosure too wide to tell" (Indeterminate); callers escalate on the
// latter and fail loudly on the former.

#include <gmpxx.h>
#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace gapcert::certnum {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Internal escalation signal: the enclosure straddles a domain boundary (or a
// divisor straddles zero) at the current precision.
struct Indeterminate : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// decide_leq exhausted its precision budget with overlapping enclosures and
// no exact reduction available.
struct UndecidableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr unsigned kDefaultMaxPrecisionBits = 4096;

// ---------------------------------------------------------------------------
// Tier 1: double intervals
// ---------------------------------------------------------------------------

namespace detail {

// IEEE arithmetic is correctly rounded: |result - exact| <= 0.5 ulp. Two
// representable steps outward always cover that, including across binade
// boundaries.
inline double out_down(double x) {
  x = std::nextafter(x, -std::numeric_limits<double>::infinity());
  return std::nextafter(x, -std::numeric_limits<double>::infinity());
}
inline double out_up(double x) {
  x = std::nextafter(x, std::numeric_limits<double>::infinity());
  return std::nextafter(x, std::numeric_limits<double>::infinity());
}
// libm log/exp carry up to ~1 ulp of error on glibc; three steps cover it.
inline double out_down3(double x) { return std::nextafter(out_down(x), -std::numeric_limits<double>::infinity()); }
inline double out_up3(double x) { return std::nextafter(out_up(x), std::numeric_limits<double>::infinity()); }

}  // namespace detail

struct DoubleInterval {
  double lo = 0.0;
  double hi = 0.0;

  static DoubleInterval exact(double v) { return {v, v}; }

  static DoubleInterval from_u64(std::uint64_t v) {
    if (v <= (std::uint64_t{1} << 53)) {
      const double d = static_cast<double>(v);
      return {d, d};
    }
    const double d = static_cast<double>(v);  // round to nearest
    return {detail::out_down(d), detail::out_up(d)};
  }

  static DoubleInterval from_i64(std::int64_t v) {
    const std::uint64_t mag = v < 0 ? 0 - static_cast<std::uint64_t>(v) : static_cast<std::uint64_t>(v);
    const double d = static_cast<double>(v);
    if (mag <= (std::uint64_t{1} << 53)) return {d, d};
    return {detail::out_down(d), detail::out_up(d)};
  }

  static DoubleInterval from_ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) throw DomainError("from_ratio: zero denominator");
    return from_i64(num) / from_i64(den);
  }

  bool strictly_positive() const { return lo > 0.0; }

  friend DoubleInterval operator+(const DoubleInterval& a, const DoubleInterval& b) {
    return {detail::out_down(a.lo + b.lo), detail::out_up(a.hi + b.hi)};
  }
  friend DoubleInterval operator-(const DoubleInterval& a, const DoubleInterval& b) {
    return {detail::out_down(a.lo - b.hi), detail::out_up(a.hi - b.lo)};
  }
  friend DoubleInterval operator-(const DoubleInterval& a) { return {-a.hi, -a.lo}; }

  friend DoubleInterval operator*(const DoubleInterval& a, const DoubleInterval& b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    const double mn = std::fmin(std::fmin(p1, p2), std::fmin(p3, p4));
    const double mx = std::fmax(std::fmax(p1, p2), std::fmax(p3, p4));
    return {detail::out_down(mn), detail::out_up(mx)};
  }

  friend DoubleInterval operator/(const DoubleInterval& a, const DoubleInterval& b) {
    if (b.lo <= 0.0 && b.hi >= 0.0) {
      if (b.lo == 0.0 && b.hi == 0.0) throw DomainError("interval division by zero");
      throw Indeterminate("divisor interval straddles zero");
    }
    const double p1 = a.lo / b.lo, p2 = a.lo / b.hi, p3 = a.hi / b.lo, p4 = a.hi / b.hi;
    const double mn = std::fmin(std::fmin(p1, p2), std::fmin(p3, p4));
    const double mx = std::fmax(std::fmax(p1, p2), std::fmax(p3, p4));
    return {detail::out_down(mn), detail::out_up(mx)};
  }

  DoubleInterval ln() const {
    if (hi <= 0.0) throw DomainError("ln of a non-positive value");
    if (lo <= 0.0) throw Indeterminate("ln argument enclosure touches zero");
    if (lo == hi) {
      const double v = std::log(lo);
      return {detail::out_down3(v), detail::out_up3(v)};
    }
    return {detail::out_down3(std::log(lo)), detail::out_up3(std::log(hi))};
  }

  DoubleInterval exp() const {
    return {detail::out_down3(std::exp(lo)), detail::out_up3(std::exp(hi))};
  }

  DoubleInterval sqr() const {
    // Our uses are nonnegative, but handle sign-straddling anyway.
    if (lo >= 0.0) return {detail::out_down(lo * lo), detail::out_up(hi * hi)};
    if (hi <= 0.0) return {detail::out_down(hi * hi), detail::out_up(lo * lo)};
    const double m = std::fmax(-lo, hi);
    return {0.0, detail::out_up(m * m)};
  }

  DoubleInterval scaled_u64(std::uint64_t k) const { return from_u64(k) * *this; }
};

// a <= b certified (touching endpoints still certify the non-strict order).
inline bool certainly_leq(const DoubleInterval& a, const DoubleInterval& b) { return a.hi <= b.lo; }
// a > b certified.
inline bool certainly_gt(const DoubleInterval& a, const DoubleInterval& b) { return a.lo > b.hi; }

// ---------------------------------------------------------------------------
// Tier 2: MPFR intervals
// ---------------------------------------------------------------------------

class CertifiedValue {
 public:
  explicit CertifiedValue(mpfr_prec_t precision_bits) {
    mpfr_init2(lo_, precision_bits);
    mpfr_init2(hi_, precision_bits);
    mpfr_set_nan(lo_);
    mpfr_set_nan(hi_);
  }

  CertifiedValue(const CertifiedValue& o) {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_set(lo_, o.lo_, MPFR_RNDD);
    mpfr_set(hi_, o.hi_, MPFR_RNDU);
  }

  CertifiedValue(CertifiedValue&& o) noexcept {
    mpfr_init2(lo_, mpfr_get_prec(o.lo_));
    mpfr_init2(hi_, mpfr_get_prec(o.hi_));
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
  }

  CertifiedValue& operator=(CertifiedValue o) noexcept {
    mpfr_swap(lo_, o.lo_);
    mpfr_swap(hi_, o.hi_);
    return *this;
  }

  ~CertifiedValue() {
    mpfr_clear(lo_);
    mpfr_clear(hi_);
  }

  static CertifiedValue from_u64(std::uint64_t v, mpfr_prec_t prec) {
    static_assert(sizeof(unsigned long) == 8, "64-bit unsigned long expected");
    CertifiedValue r(prec);
    mpfr_set_ui(r.lo_, static_cast<unsigned long>(v), MPFR_RNDD);
    mpfr_set_ui(r.hi_, static_cast<unsigned long>(v), MPFR_RNDU);
    return r;
  }

  static CertifiedValue from_rational(const mpq_class& q, mpfr_prec_t prec) {
    CertifiedValue r(prec);
    mpfr_set_q(r.lo_, q.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(r.hi_, q.get_mpq_t(), MPFR_RNDU);
    return r;
  }

  mpfr_prec_t precision_bits() const { return mpfr_get_prec(lo_); }

  bool is_nan() const { return mpfr_nan_p(lo_) || mpfr_nan_p(hi_); }

  double lo_double() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double hi_double() const { return mpfr_get_d(hi_, MPFR_RNDU); }

  // Decimal rendering of one endpoint, rounded in the enclosure-safe
  // direction (lower bound toward -inf, upper bound toward +inf).
  std::string lo_string(int significant_digits = 24) const { return format(lo_, MPFR_RNDD, significant_digits); }
  std::string hi_string(int significant_digits = 24) const { return format(hi_, MPFR_RNDU, significant_digits); }

  // Upper bound on the enclosure width hi - lo.
  double width_upper() const {
    mpfr_t w;
    mpfr_init2(w, 64);
    mpfr_sub(w, hi_, lo_, MPFR_RNDU);
    const double d = mpfr_get_d(w, MPFR_RNDU);
    mpfr_clear(w);
    return d;
  }

  bool contains(const mpq_class& q) const {
    return mpfr_cmp_q(lo_, q.get_mpq_t()) <= 0 && mpfr_cmp_q(hi_, q.get_mpq_t()) >= 0;
  }
  bool contains_u64(std::uint64_t v) const {
    return mpfr_cmp_ui(lo_, static_cast<unsigned long>(v)) <= 0 && mpfr_cmp_ui(hi_, static_cast<unsigned long>(v)) >= 0;
  }

  // o's enclosure lies within this one (used by the precision-nesting tests).
  bool encloses(const CertifiedValue& o) const {
    return mpfr_cmp(lo_, o.lo_) <= 0 && mpfr_cmp(hi_, o.hi_) >= 0;
  }

  bool strictly_positive() const { return mpfr_sgn(lo_) > 0; }

  friend CertifiedValue operator+(const CertifiedValue& a, const CertifiedValue& b) {
    CertifiedValue r(result_prec(a, b));
    mpfr_add(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_add(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
    return r;
  }

  friend CertifiedValue operator-(const CertifiedValue& a, const CertifiedValue& b) {
    CertifiedValue r(result_prec(a, b));
    mpfr_sub(r.lo_, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_sub(r.hi_, a.hi_, b.lo_, MPFR_RNDU);
    return r;
  }

  friend CertifiedValue operator-(const CertifiedValue& a) {
    CertifiedValue r(a.precision_bits());
    mpfr_neg(r.lo_, a.hi_, MPFR_RNDD);
    mpfr_neg(r.hi_, a.lo_, MPFR_RNDU);
    return r;
  }

  friend CertifiedValue operator*(const CertifiedValue& a, const CertifiedValue& b) {
    const mpfr_prec_t prec = result_prec(a, b);
    CertifiedValue r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    // min over the four endpoint products rounded down
    mpfr_mul(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    // max over the four endpoint products rounded up
    mpfr_mul(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
    mpfr_mul(t, a.lo_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, a.hi_, b.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_mul(t, a.hi_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
  }

  friend CertifiedValue operator/(const CertifiedValue& a, const CertifiedValue& b) {
    if (mpfr_sgn(b.lo_) <= 0 && mpfr_sgn(b.hi_) >= 0) {
      if (mpfr_zero_p(b.lo_) && mpfr_zero_p(b.hi_)) throw DomainError("interval division by zero");
      throw Indeterminate("divisor interval straddles zero");
    }
    const mpfr_prec_t prec = result_prec(a, b);
    CertifiedValue r(prec);
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_div(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
    mpfr_div(t, a.lo_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(t, a.hi_, b.lo_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(t, a.hi_, b.hi_, MPFR_RNDD);
    mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
    mpfr_div(r.hi_, a.lo_, b.lo_, MPFR_RNDU);
    mpfr_div(t, a.lo_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_div(t, a.hi_, b.lo_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_div(t, a.hi_, b.hi_, MPFR_RNDU);
    mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    mpfr_clear(t);
    return r;
  }

  friend CertifiedValue ln(const CertifiedValue& a) {
    if (mpfr_sgn(a.hi_) <= 0) throw DomainError("ln of a non-positive value");
    if (mpfr_sgn(a.lo_) <= 0) throw Indeterminate("ln argument enclosure touches zero");
    CertifiedValue r(a.precision_bits());
    mpfr_log(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_log(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend CertifiedValue exp(const CertifiedValue& a) {
    CertifiedValue r(a.precision_bits());
    mpfr_exp(r.lo_, a.lo_, MPFR_RNDD);
    mpfr_exp(r.hi_, a.hi_, MPFR_RNDU);
    return r;
  }

  friend CertifiedValue sqr(const CertifiedValue& a) { return a * a; }

  friend CertifiedValue pow_int(const CertifiedValue& a, long e) {
    CertifiedValue acc = from_u64(1, a.precision_bits());
    bool invert = e < 0;
    unsigned long k = invert ? static_cast<unsigned long>(-(e + 1)) + 1 : static_cast<unsigned long>(e);
    CertifiedValue base = a;
    while (k != 0) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    if (invert) return from_u64(1, a.precision_bits()) / acc;
    return acc;
  }

  friend bool certainly_leq(const CertifiedValue& a, const CertifiedValue& b) {
    return mpfr_cmp(a.hi_, b.lo_) <= 0;
  }
  friend bool certainly_gt(const CertifiedValue& a, const CertifiedValue& b) {
    return mpfr_cmp(a.lo_, b.hi_) > 0;
  }
  // lo >= v: the enclosed value is certainly >= v.
  bool lo_at_least_u64(std::uint64_t v) const { return mpfr_cmp_ui(lo_, static_cast<unsigned long>(v)) >= 0; }
  // hi < v: the enclosed value is certainly < v.
  bool hi_below_u64(std::uint64_t v) const { return mpfr_cmp_ui(hi_, static_cast<unsigned long>(v)) < 0; }

 private:
  static mpfr_prec_t result_prec(const CertifiedValue& a, const CertifiedValue& b) {
    return std::max(a.precision_bits(), b.precision_bits());
  }

  static std::string format(const mpfr_t v, mpfr_rnd_t rnd, int digits) {
    char* s = nullptr;
    mpfr_asprintf(&s, rnd == MPFR_RNDD ? "%.*RDg" : "%.*RUg", digits, v);
    std::string out(s);
    mpfr_free_str(s);
    return out;
  }

  mpfr_t lo_;
  mpfr_t hi_;
};

// Namespace-scope declarations for the hidden friends, so qualified lookup
// (e.g. from inside class scopes that shadow these names) still finds them.
CertifiedValue ln(const CertifiedValue&);
CertifiedValue exp(const CertifiedValue&);
CertifiedValue sqr(const CertifiedValue&);
CertifiedValue pow_int(const CertifiedValue&, long);
bool certainly_leq(const CertifiedValue&, const CertifiedValue&);
bool certainly_gt(const CertifiedValue&, const CertifiedValue&);

// Certified enclosure of ln(x) for an exact integer or rational argument.
// The enclosure width is at most one ulp at the requested precision, i.e.
// <= 2^(1-precision_bits) * |ln x|.
inline CertifiedValue certified_ln(std::uint64_t x, mpfr_prec_t precision_bits = 128) {
  if (x == 0) throw DomainError("ln of zero");
  return ln(CertifiedValue::from_u64(x, precision_bits));
}

inline CertifiedValue certified_ln(const mpq_class& x, mpfr_prec_t precision_bits = 128) {
  if (sgn(x) <= 0) throw DomainError("ln of a non-positive rational");
  if (x == 1) {
    CertifiedValue z = CertifiedValue::from_u64(0, precision_bits);
    return z;
  }
  return ln(CertifiedValue::from_rational(x, precision_bits));
}

}  // namespace gapcert::certnum
