#pragma once

// Maximal-gap table ingestion and the interval argument. A validated record
// (i, g*, p*, n*) certifies every prime in [p*_i, p*_{i+1} - 1]: gaps there
// never exceed g*_i, and the monotone sufficient bound f only grows, so
// g*_i <= f(n*_i) settles the whole interval. Verification compares g*
// against the certified LOWER bound of f, never a midpoint, so a reported
// Holds survives any rounding.

#include <cstdint>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "gapcert/certnum.hpp"
#include "gapcert/primality.hpp"
#include "gapcert/reference_table.hpp"
#include "gapcert/types.hpp"

namespace gapcert::gaptable {

struct TableParseError : std::runtime_error {
  std::size_t line;
  TableParseError(std::size_t line_no, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_no) + ": " + what), line(line_no) {}
};

struct TableValidationError : std::runtime_error {
  std::uint64_t rank;
  TableValidationError(std::uint64_t rank_no, const std::string& what)
      : std::runtime_error("rank " + std::to_string(rank_no) + ": " + what), rank(rank_no) {}
};

// Records with start primes below this are handled by direct sieving: the
// sufficient conditions only begin to clear the record gaps from the fifth
// record (start prime 89) onward.
inline constexpr std::uint64_t kDirectCheckBelow = 89;

// (ln(n ln n) - 1) * ln(n ln n); monotone gap bound sufficient for the
// Nicholson (hence Firoozbakht) conjecture. Domain n >= 2.
inline certnum::CertifiedValue nicholson_sufficient_bound(std::uint64_t n, mpfr_prec_t prec = 96) {
  if (n < 2) throw certnum::DomainError("nicholson sufficient bound needs n >= 2");
  using certnum::CertifiedValue;
  const CertifiedValue nv = CertifiedValue::from_u64(n, prec);
  const CertifiedValue one = CertifiedValue::from_u64(1, prec);
  const CertifiedValue u = ln(nv * ln(nv));
  return (u - one) * u;
}

// (ln(n ln n) - 1) * (ln(n ln n) + ln ln n - ln ln(n ln(n ln n))); monotone
// gap bound sufficient for the Farhadian conjecture. Domain n >= 7.
inline certnum::CertifiedValue farhadian_sufficient_bound(std::uint64_t n, mpfr_prec_t prec = 96) {
  if (n < 7) throw certnum::DomainError("farhadian sufficient bound needs n >= 7");
  using certnum::CertifiedValue;
  const CertifiedValue nv = CertifiedValue::from_u64(n, prec);
  const CertifiedValue one = CertifiedValue::from_u64(1, prec);
  const CertifiedValue u = ln(nv * ln(nv));
  return (u - one) * (u + ln(ln(nv)) - ln(ln(nv * u)));
}

namespace detail {

inline std::uint64_t parse_u64_field(const std::string& field, std::size_t line_no) {
  if (field.empty()) throw TableParseError(line_no, "empty field");
  std::uint64_t v = 0;
  for (const char c : field) {
    if (c < '0' || c > '9') throw TableParseError(line_no, "non-numeric field '" + field + "'");
    const std::uint64_t digit = static_cast<std::uint64_t>(c - '0');
    if (v > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) {
      throw TableParseError(line_no, "value out of 64-bit range '" + field + "'");
    }
    v = v * 10 + digit;
  }
  return v;
}

// p > n (ln(n ln n) - 1) for n >= 2, decided with certified arithmetic.
inline bool dusart_consistent(std::uint64_t p, std::uint64_t n) {
  using certnum::Expr;
  const Expr nv = Expr::integer(n);
  const Expr bound = nv * (Expr::ln(nv * Expr::ln(nv)) - Expr::integer(1));
  // strict >: p <= bound must certifiably fail (ties are impossible, the
  // bound is transcendental at integer n)
  return certnum::decide_leq(Expr::integer(p), bound).outcome == certnum::LeqOutcome::kFails;
}

}  // namespace detail

// Parses and validates a maximal-gap table. CSV with the exact header
// `rank,gap,start_prime,start_index`, one record per line. Validation:
// all four columns strictly increasing, gap < start_prime, gap parity, both
// gap endpoints prime, and Dusart consistency of (start_prime, start_index).
inline std::vector<MaximalGapRecord> load_table(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw TableParseError(1, "empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "rank,gap,start_prime,start_index") {
    throw TableParseError(1, "expected header 'rank,gap,start_prime,start_index'");
  }

  std::vector<MaximalGapRecord> records;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::uint64_t values[4];
    for (int i = 0; i < 4; ++i) {
      if (!std::getline(ss, field, ',')) throw TableParseError(line_no, "expected 4 fields");
      values[i] = detail::parse_u64_field(field, line_no);
    }
    if (std::getline(ss, field, ',')) throw TableParseError(line_no, "more than 4 fields");
    records.push_back({values[0], values[1], values[2], values[3]});
  }
  if (records.empty()) throw TableParseError(line_no, "no records");

  MaximalGapRecord prev{};
  for (const auto& r : records) {
    if (r.rank <= prev.rank) throw TableValidationError(r.rank, "rank column is not strictly increasing");
    if (r.gap <= prev.gap) throw TableValidationError(r.rank, "gap column is not strictly increasing");
    if (r.start_prime <= prev.start_prime) {
      throw TableValidationError(r.rank, "start_prime column is not strictly increasing");
    }
    if (r.start_index <= prev.start_index) {
      throw TableValidationError(r.rank, "start_index column is not strictly increasing");
    }
    if (r.gap >= r.start_prime) throw TableValidationError(r.rank, "gap must be below start_prime");
    if (r.start_prime > 2 && r.gap % 2 != 0) {
      throw TableValidationError(r.rank, "gap at an odd prime must be even");
    }
    if (!is_prime_u64(r.start_prime)) throw TableValidationError(r.rank, "start_prime is not prime");
    if (r.gap <= std::numeric_limits<std::uint64_t>::max() - r.start_prime &&
        !is_prime_u64(r.start_prime + r.gap)) {
      throw TableValidationError(r.rank, "start_prime + gap is not prime");
    }
    if (r.start_index >= 2 && !detail::dusart_consistent(r.start_prime, r.start_index)) {
      throw TableValidationError(r.rank, "start_prime violates the Dusart lower bound at start_index");
    }
    prev = r;
  }
  return records;
}

inline std::vector<MaximalGapRecord> load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  return load_table(in);
}

enum class TablePath { kNicholsonFiroozbakht, kFarhadian };

inline std::string_view to_string(TablePath p) {
  return p == TablePath::kNicholsonFiroozbakht ? "nicholson_firoozbakht" : "farhadian";
}

struct IntervalVerdict {
  std::uint64_t rank = 0;
  TablePath path = TablePath::kNicholsonFiroozbakht;
  std::uint64_t gap = 0;              // lhs of the sufficient condition
  std::string bound_lower;            // certified lower bound of f(start_index), rounded down
  Outcome outcome = Outcome::kFails;  // kHolds / kFails only
  unsigned precision_bits = 0;
};

struct IntervalReport {
  std::vector<IntervalVerdict> verdicts;
  std::vector<MaximalGapRecord> routed_to_direct;  // start_prime < 89: check by sieve
  bool all_hold = true;
};

// Runs the interval argument for one sufficient-condition path over the
// table. Every in-domain record must satisfy g* <= lower bound of f(n*); a
// failing record is reported, not dropped.
inline IntervalReport verify_intervals(const std::vector<MaximalGapRecord>& records, TablePath path) {
  IntervalReport report;
  for (const auto& r : records) {
    if (r.start_prime < kDirectCheckBelow) {
      report.routed_to_direct.push_back(r);
      continue;
    }
    IntervalVerdict v;
    v.rank = r.rank;
    v.path = path;
    v.gap = r.gap;
    bool decided = false;
    for (mpfr_prec_t prec = 96; prec <= certnum::kDefaultMaxPrecisionBits; prec *= 2) {
      const certnum::CertifiedValue f = path == TablePath::kNicholsonFiroozbakht
                                            ? nicholson_sufficient_bound(r.start_index, prec)
                                            : farhadian_sufficient_bound(r.start_index, prec);
      if (f.lo_at_least_u64(r.gap)) {
        v.outcome = Outcome::kHolds;
        v.bound_lower = f.lo_string();
        v.precision_bits = static_cast<unsigned>(prec);
        decided = true;
        break;
      }
      if (f.hi_below_u64(r.gap)) {
        v.outcome = Outcome::kFails;
        v.bound_lower = f.lo_string();
        v.precision_bits = static_cast<unsigned>(prec);
        decided = true;
        break;
      }
    }
    if (!decided) {
      throw certnum::UndecidableError("sufficient bound comparison failed to separate at rank " +
                                      std::to_string(r.rank));
    }
    report.all_hold = report.all_hold && v.outcome == Outcome::kHolds;
    report.verdicts.push_back(std::move(v));
  }
  return report;
}

struct KourbatovRecordVerdict {
  std::uint64_t rank = 0;
  Outcome outcome = Outcome::kOutOfDomain;  // out-of-domain when start_index < 10
  std::string bound_lower;                  // certified lower bound of the rhs
};

// g* <= ln^2 p* - ln p* - 117/100 for every record with start_index >= 10.
inline std::vector<KourbatovRecordVerdict> verify_kourbatov_records(const std::vector<MaximalGapRecord>& records) {
  using certnum::CertifiedValue;
  std::vector<KourbatovRecordVerdict> out;
  for (const auto& r : records) {
    KourbatovRecordVerdict v;
    v.rank = r.rank;
    if (r.start_index >= 10) {
      bool decided = false;
      for (mpfr_prec_t prec = 96; prec <= certnum::kDefaultMaxPrecisionBits; prec *= 2) {
        const CertifiedValue lp = certnum::certified_ln(r.start_prime, prec);
        const CertifiedValue rhs =
            sqr(lp) - lp - CertifiedValue::from_rational(mpq_class(117, 100), prec);
        if (rhs.lo_at_least_u64(r.gap)) {
          v.outcome = Outcome::kHolds;
          v.bound_lower = rhs.lo_string();
          decided = true;
          break;
        }
        if (rhs.hi_below_u64(r.gap)) {
          v.outcome = Outcome::kFails;
          v.bound_lower = rhs.lo_string();
          decided = true;
          break;
        }
      }
      if (!decided) {
        throw certnum::UndecidableError("kourbatov bound comparison failed to separate at rank " +
                                        std::to_string(r.rank));
      }
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace gapcert::gaptable
