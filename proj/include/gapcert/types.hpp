#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gapcert {

// One consecutive-prime pair: p is the n-th prime (1-based, p_1 = 2).
struct PrimeGapEvent {
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  std::uint64_t p_next = 0;
  std::uint64_t gap = 0;

  friend bool operator==(const PrimeGapEvent&, const PrimeGapEvent&) = default;
};

// One record gap: the rank-th maximal prime gap, of width gap, starting at
// the start_index-th prime start_prime.
struct MaximalGapRecord {
  std::uint64_t rank = 0;
  std::uint64_t gap = 0;
  std::uint64_t start_prime = 0;
  std::uint64_t start_index = 0;

  friend bool operator==(const MaximalGapRecord&, const MaximalGapRecord&) = default;
};

enum class Conjecture { kFiroozbakht, kNicholson, kFarhadian, kCramerStrong, kKourbatov };

enum class Outcome { kHolds, kFails, kOutOfDomain };

struct Verdict {
  Outcome outcome = Outcome::kOutOfDomain;
  Conjecture conjecture = Conjecture::kFiroozbakht;
  std::uint64_t n = 0;
  std::uint64_t p = 0;

  bool holds() const { return outcome == Outcome::kHolds; }
  friend bool operator==(const Verdict&, const Verdict&) = default;
};

inline std::string_view to_string(Conjecture c) {
  switch (c) {
    case Conjecture::kFiroozbakht: return "firoozbakht";
    case Conjecture::kNicholson: return "nicholson";
    case Conjecture::kFarhadian: return "farhadian";
    case Conjecture::kCramerStrong: return "cramer";
    case Conjecture::kKourbatov: return "kourbatov";
  }
  return "?";
}

inline Conjecture conjecture_from_string(std::string_view s) {
  if (s == "firoozbakht") return Conjecture::kFiroozbakht;
  if (s == "nicholson") return Conjecture::kNicholson;
  if (s == "farhadian") return Conjecture::kFarhadian;
  if (s == "cramer") return Conjecture::kCramerStrong;
  if (s == "kourbatov") return Conjecture::kKourbatov;
  throw std::invalid_argument("unknown conjecture: " + std::string(s));
}

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kHolds: return "holds";
    case Outcome::kFails: return "fails";
    case Outcome::kOutOfDomain: return "out_of_domain";
  }
  return "?";
}

}  // namespace gapcert
