#pragma once

// Per-event conjecture predicates. Each inequality is first decided on the
// cheap double-interval tier from a shared bundle of logarithm enclosures;
// only near-ties escalate to the certified expression kernel (and, for the
// pure power comparison, to exact integer arithmetic). A predicate therefore
// never returns a verdict that unguarded floating point could have gotten
// wrong.
//
// Inequalities evaluated (g = p_next - p, all logarithms natural):
//   firoozbakht   n (ln p_next - ln p) <= ln p            (n >= 1)
//   nicholson     n (ln p_next - ln p) <= ln n + ln ln n  (n > 4)
//   farhadian     n (ln p_next - ln p) <= ln p + ln ln n - ln ln p  (n > 4)
//   cramer        g <= ln^2 p                             (n >= 5)
//   kourbatov     g <= ln^2 p - ln p - 117/100            (n >= 10)
// The first three are the ratio forms of the corresponding gap-bound
// statements; the paired property test in the suite checks that equivalence.

#include <cstdint>
#include <stdexcept>

#include "gapcert/certnum.hpp"
#include "gapcert/sieve.hpp"
#include "gapcert/types.hpp"

namespace gapcert::conj {

// Shared double-tier enclosures for one event. Members past ln_p/ln_p_next
// are populated only when n >= 5 (the small-n predicates never read them).
struct EventLogs {
  certnum::DoubleInterval ln_p;
  certnum::DoubleInterval ln_p_next;
  certnum::DoubleInterval ln_n;
  certnum::DoubleInterval ln_ln_n;
  certnum::DoubleInterval ln_ln_p;

  static EventLogs for_event(const PrimeGapEvent& e) {
    EventLogs logs;
    logs.ln_p = certnum::DoubleInterval::from_u64(e.p).ln();
    logs.ln_p_next = certnum::DoubleInterval::from_u64(e.p_next).ln();
    if (e.n >= 5) {
      logs.ln_n = certnum::DoubleInterval::from_u64(e.n).ln();
      logs.ln_ln_n = logs.ln_n.ln();
      logs.ln_ln_p = logs.ln_p.ln();
    }
    return logs;
  }
};

namespace detail {

using certnum::Expr;

inline Expr ln_u(std::uint64_t v) { return Expr::ln(Expr::integer(v)); }

inline Outcome from_bool(bool holds) { return holds ? Outcome::kHolds : Outcome::kFails; }

// n (ln p_next - ln p) as expressions, shared by the three ratio forms.
inline Expr ratio_lhs(const PrimeGapEvent& e) {
  return Expr::integer(e.n) * (ln_u(e.p_next) - ln_u(e.p));
}

}  // namespace detail

inline Verdict check_firoozbakht(const PrimeGapEvent& e, const EventLogs& logs) {
  Verdict v{Outcome::kHolds, Conjecture::kFiroozbakht, e.n, e.p};
  const auto lhs = (logs.ln_p_next - logs.ln_p).scaled_u64(e.n);
  if (certainly_leq(lhs, logs.ln_p)) return v;
  if (certainly_gt(lhs, logs.ln_p)) {
    v.outcome = Outcome::kFails;
    return v;
  }
  // Tie at 53 bits: the statement is (p_next)^n <= p^(n+1); settle exactly.
  v.outcome = detail::from_bool(certnum::exact_pow_leq(e.p_next, e.n, e.p, e.n + 1));
  return v;
}

inline Verdict check_nicholson(const PrimeGapEvent& e, const EventLogs& logs) {
  Verdict v{Outcome::kOutOfDomain, Conjecture::kNicholson, e.n, e.p};
  if (e.n <= 4) return v;
  const auto lhs = (logs.ln_p_next - logs.ln_p).scaled_u64(e.n);
  const auto rhs = logs.ln_n + logs.ln_ln_n;
  if (certainly_leq(lhs, rhs)) {
    v.outcome = Outcome::kHolds;
    return v;
  }
  if (certainly_gt(lhs, rhs)) {
    v.outcome = Outcome::kFails;
    return v;
  }
  using detail::Expr;
  const Expr ln_n = detail::ln_u(e.n);
  const certnum::Decision d = certnum::decide_leq(detail::ratio_lhs(e), ln_n + Expr::ln(ln_n));
  v.outcome = detail::from_bool(d.holds());
  return v;
}

inline Verdict check_farhadian(const PrimeGapEvent& e, const EventLogs& logs) {
  Verdict v{Outcome::kOutOfDomain, Conjecture::kFarhadian, e.n, e.p};
  if (e.n <= 4) return v;
  const auto lhs = (logs.ln_p_next - logs.ln_p).scaled_u64(e.n);
  const auto rhs = logs.ln_p + logs.ln_ln_n - logs.ln_ln_p;
  if (certainly_leq(lhs, rhs)) {
    v.outcome = Outcome::kHolds;
    return v;
  }
  if (certainly_gt(lhs, rhs)) {
    v.outcome = Outcome::kFails;
    return v;
  }
  using detail::Expr;
  const Expr ln_n = detail::ln_u(e.n);
  const Expr ln_p = detail::ln_u(e.p);
  const certnum::Decision d =
      certnum::decide_leq(detail::ratio_lhs(e), ln_p + Expr::ln(ln_n) - Expr::ln(ln_p));
  v.outcome = detail::from_bool(d.holds());
  return v;
}

inline Verdict check_cramer_strong(const PrimeGapEvent& e, const EventLogs& logs) {
  Verdict v{Outcome::kOutOfDomain, Conjecture::kCramerStrong, e.n, e.p};
  if (e.n < 5) return v;
  const auto gap = certnum::DoubleInterval::from_u64(e.gap);
  const auto rhs = logs.ln_p.sqr();
  if (certainly_leq(gap, rhs)) {
    v.outcome = Outcome::kHolds;
    return v;
  }
  if (certainly_gt(gap, rhs)) {
    v.outcome = Outcome::kFails;
    return v;
  }
  using detail::Expr;
  const Expr ln_p = detail::ln_u(e.p);
  const certnum::Decision d = certnum::decide_leq(Expr::integer(e.gap), ln_p * ln_p);
  v.outcome = detail::from_bool(d.holds());
  return v;
}

inline Verdict check_kourbatov_sufficient(const PrimeGapEvent& e, const EventLogs& logs) {
  Verdict v{Outcome::kOutOfDomain, Conjecture::kKourbatov, e.n, e.p};
  if (e.n < 10) return v;
  const auto gap = certnum::DoubleInterval::from_u64(e.gap);
  const auto rhs = logs.ln_p.sqr() - logs.ln_p - certnum::DoubleInterval::from_ratio(117, 100);
  if (certainly_leq(gap, rhs)) {
    v.outcome = Outcome::kHolds;
    return v;
  }
  if (certainly_gt(gap, rhs)) {
    v.outcome = Outcome::kFails;
    return v;
  }
  using detail::Expr;
  const Expr ln_p = detail::ln_u(e.p);
  const certnum::Decision d =
      certnum::decide_leq(Expr::integer(e.gap), ln_p * ln_p - ln_p - Expr::rational(117, 100));
  v.outcome = detail::from_bool(d.holds());
  return v;
}

inline Verdict check_firoozbakht(const PrimeGapEvent& e) { return check_firoozbakht(e, EventLogs::for_event(e)); }
inline Verdict check_nicholson(const PrimeGapEvent& e) { return check_nicholson(e, EventLogs::for_event(e)); }
inline Verdict check_farhadian(const PrimeGapEvent& e) { return check_farhadian(e, EventLogs::for_event(e)); }
inline Verdict check_cramer_strong(const PrimeGapEvent& e) { return check_cramer_strong(e, EventLogs::for_event(e)); }
inline Verdict check_kourbatov_sufficient(const PrimeGapEvent& e) {
  return check_kourbatov_sufficient(e, EventLogs::for_event(e));
}

inline Verdict check(Conjecture c, const PrimeGapEvent& e, const EventLogs& logs) {
  switch (c) {
    case Conjecture::kFiroozbakht: return check_firoozbakht(e, logs);
    case Conjecture::kNicholson: return check_nicholson(e, logs);
    case Conjecture::kFarhadian: return check_farhadian(e, logs);
    case Conjecture::kCramerStrong: return check_cramer_strong(e, logs);
    case Conjecture::kKourbatov: return check_kourbatov_sufficient(e, logs);
  }
  throw std::logic_error("unreachable conjecture");
}

// Verifies farhadian => nicholson => firoozbakht on one event (vacuous for
// n <= 4). A violation would contradict n ln n < p < n ln p and is a logic
// error, not a data condition.
inline void assert_implication_chain(const Verdict& firoozbakht, const Verdict& nicholson,
                                     const Verdict& farhadian) {
  const bool far_implies_nic = !farhadian.holds() || nicholson.holds();
  const bool nic_implies_fir = !nicholson.holds() || firoozbakht.holds();
  if (!far_implies_nic || !nic_implies_fir) {
    throw std::logic_error("implication chain violated at n=" + std::to_string(firoozbakht.n));
  }
}

// p_m * p_n > p_(m+n), exact in 128-bit arithmetic. Throws std::out_of_range
// when the source cannot supply p_(m+n).
inline bool check_chebyshev_average(std::uint64_t m, std::uint64_t n, const sieve::PrimeTable& primes) {
  if (m < 1 || n < 1) throw std::out_of_range("indices must be >= 1");
  const std::uint64_t pm = primes.prime(m);
  const std::uint64_t pn = primes.prime(n);
  const std::uint64_t pmn = primes.prime(m + n);
  return static_cast<unsigned __int128>(pm) * pn > pmn;
}

}  // namespace gapcert::conj
