#pragma once

// Machine-readable summary of a completed verification run. Certificates
// serialize to JSON with a stable field order so identical runs produce
// identical documents apart from wall_time_seconds and tool_version.

#include <openssl/evp.h>

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gapcert/types.hpp"
#include "gapcert/version.hpp"

namespace gapcert::cert {

struct VerdictCounts {
  std::uint64_t holds = 0;
  std::uint64_t fails = 0;
  std::uint64_t out_of_domain = 0;

  void add(Outcome o) {
    switch (o) {
      case Outcome::kHolds: ++holds; break;
      case Outcome::kFails: ++fails; break;
      case Outcome::kOutOfDomain: ++out_of_domain; break;
    }
  }
};

struct ExceptionEntry {
  Conjecture conjecture = Conjecture::kFiroozbakht;
  std::uint64_t n = 0;
  std::uint64_t p = 0;
  Outcome outcome = Outcome::kOutOfDomain;
};

struct VerificationCertificate {
  std::string tool_version = kToolVersion;
  std::string mode;  // "direct" | "table"
  std::vector<Conjecture> conjectures;
  // direct mode
  std::uint64_t range_lo = 0;
  std::uint64_t range_hi = 0;
  // table mode
  std::string table_digest;
  std::uint64_t table_records = 0;
  bool table_matches_reference = false;
  std::uint64_t valid_below_rank = 0;  // coverage: all primes before this maximal gap
  // common
  std::map<std::string, VerdictCounts> verdict_summary;
  std::vector<ExceptionEntry> exceptions;
  bool exceptions_truncated = false;
  double wall_time_seconds = 0.0;

  bool any_fails() const {
    for (const auto& [name, counts] : verdict_summary) {
      if (counts.fails != 0) return true;
    }
    return false;
  }
};

inline constexpr std::size_t kMaxListedExceptions = 10'000;

inline nlohmann::ordered_json to_json(const VerificationCertificate& c) {
  nlohmann::ordered_json j;
  j["tool_version"] = c.tool_version;
  j["mode"] = c.mode;
  nlohmann::ordered_json names = nlohmann::ordered_json::array();
  for (const Conjecture conj : c.conjectures) names.push_back(std::string(to_string(conj)));
  j["conjectures"] = std::move(names);
  if (c.mode == "direct") {
    j["range_lo"] = c.range_lo;
    j["range_hi"] = c.range_hi;
  } else {
    j["table_digest"] = c.table_digest;
    j["table_records"] = c.table_records;
    j["table_matches_reference"] = c.table_matches_reference;
    j["valid_below_rank"] = c.valid_below_rank;
  }
  nlohmann::ordered_json summary;
  for (const auto& [name, counts] : c.verdict_summary) {
    summary[name] = {{"holds", counts.holds}, {"fails", counts.fails}, {"out_of_domain", counts.out_of_domain}};
  }
  j["verdict_summary"] = std::move(summary);
  nlohmann::ordered_json exceptions = nlohmann::ordered_json::array();
  for (const auto& e : c.exceptions) {
    exceptions.push_back({{"conjecture", std::string(to_string(e.conjecture))},
                          {"n", e.n},
                          {"p", e.p},
                          {"outcome", std::string(to_string(e.outcome))}});
  }
  j["exceptions"] = std::move(exceptions);
  if (c.exceptions_truncated) j["exceptions_truncated"] = true;
  j["wall_time_seconds"] = c.wall_time_seconds;
  return j;
}

inline std::string sha256_hex(const void* data, std::size_t size) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx, data, size) != 1 || EVP_DigestFinal_ex(ctx, digest, &digest_len) != 1) {
    EVP_MD_CTX_free(ctx);
    throw std::runtime_error("sha256 computation failed");
  }
  EVP_MD_CTX_free(ctx);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * digest_len);
  for (unsigned int i = 0; i < digest_len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 15]);
  }
  return out;
}

inline std::string sha256_hex_of_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file for hashing: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  return "sha256:" + sha256_hex(bytes.data(), bytes.size());
}

}  // namespace gapcert::cert
