// gapcert: prime-gap conjecture verification front end.
//
//   verify-direct  streams prime gaps up to a limit and checks the selected
//                  conjectures on every pair, with certified arithmetic
//   verify-table   ingests a maximal-gap table and reruns the interval
//                  argument (plus the sub-89 primes directly)
//   find-gaps      discovers maximal gap records up to a limit as CSV
//
// Exit codes: 0 all holds (out-of-domain listed), 1 any fails, 2 input or
// validation error, 130 interrupted. Standard output carries only
// machine-readable artifacts; progress goes to standard error.

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <csignal>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gapcert/certificate.hpp"
#include "gapcert/conjectures.hpp"
#include "gapcert/gaptable.hpp"
#include "gapcert/sieve.hpp"
#include "gapcert/types.hpp"
#include "gapcert/version.hpp"

namespace {

using namespace gapcert;

std::atomic<bool> g_stop{false};

void handle_signal(int) { g_stop.store(true); }

constexpr std::uint64_t kLimitCap = std::uint64_t{1} << 63;

std::vector<Conjecture> parse_conjectures(const std::string& csv) {
  std::vector<Conjecture> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(conjecture_from_string(item));
  }
  if (out.empty()) throw std::invalid_argument("no conjectures selected");
  return out;
}

bool selected(const std::vector<Conjecture>& list, Conjecture c) {
  return std::find(list.begin(), list.end(), c) != list.end();
}

void emit_certificate(const cert::VerificationCertificate& c, const std::string& out_path, bool single_line) {
  const nlohmann::ordered_json j = cert::to_json(c);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write certificate to " + out_path);
    out << j.dump(2) << '\n';
  } else {
    std::cout << (single_line ? j.dump() : j.dump(2)) << '\n';
  }
}

struct DirectArgs {
  std::uint64_t limit = 0;
  std::string conjectures = "firoozbakht,nicholson,farhadian,cramer,kourbatov";
  std::string checkpoint_path;
  std::string out_path;
  std::string margins_path;
};

// Conservative lower bound on rhs - lhs for one conjecture at one event;
// NaN when the event is outside the conjecture's domain.
double margin_lower(Conjecture c, const PrimeGapEvent& e, const conj::EventLogs& logs) {
  using certnum::DoubleInterval;
  const auto slack = [](const DoubleInterval& lhs, const DoubleInterval& rhs) { return (rhs - lhs).lo; };
  const DoubleInterval ratio_lhs = (logs.ln_p_next - logs.ln_p).scaled_u64(e.n);
  const DoubleInterval gap = DoubleInterval::from_u64(e.gap);
  switch (c) {
    case Conjecture::kFiroozbakht: return slack(ratio_lhs, logs.ln_p);
    case Conjecture::kNicholson:
      if (e.n <= 4) break;
      return slack(ratio_lhs, logs.ln_n + logs.ln_ln_n);
    case Conjecture::kFarhadian:
      if (e.n <= 4) break;
      return slack(ratio_lhs, logs.ln_p + logs.ln_ln_n - logs.ln_ln_p);
    case Conjecture::kCramerStrong:
      if (e.n < 5) break;
      return slack(gap, logs.ln_p.sqr());
    case Conjecture::kKourbatov:
      if (e.n < 10) break;
      return slack(gap, logs.ln_p.sqr() - logs.ln_p - certnum::DoubleInterval::from_ratio(117, 100));
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int run_verify_direct(const DirectArgs& args) {
  if (args.limit < 3) {
    std::cerr << "error: --limit must be at least 3 (no prime pair exists below 3)\n";
    return 2;
  }
  if (args.limit > kLimitCap) {
    std::cerr << "error: --limit is capped at 2^63\n";
    return 2;
  }
  const auto conjectures = parse_conjectures(args.conjectures);
  const auto t0 = std::chrono::steady_clock::now();

  sieve::StreamOptions opts;
  opts.limit = args.limit;
  opts.stop = &g_stop;
  std::uint64_t range_lo = 2;
  if (!args.checkpoint_path.empty() && std::filesystem::exists(args.checkpoint_path)) {
    opts.resume = sieve::load_checkpoint(args.checkpoint_path);
    range_lo = opts.resume->p_last;
    std::cerr << "resuming after p=" << opts.resume->p_last << " (n=" << opts.resume->n_last << ")\n";
  }
  opts.on_checkpoint = [&](const sieve::Checkpoint& c) {
    if (!args.checkpoint_path.empty()) sieve::save_checkpoint(c, args.checkpoint_path);
    std::cerr << "progress: p=" << c.p_last << " n=" << c.n_last << " records=" << c.records_so_far.size()
              << "\n";
  };

  cert::VerificationCertificate certificate;
  certificate.mode = "direct";
  certificate.conjectures = conjectures;
  certificate.range_lo = range_lo;
  certificate.range_hi = args.limit;
  for (const Conjecture c : conjectures) certificate.verdict_summary[std::string(to_string(c))] = {};

  const bool chain = selected(conjectures, Conjecture::kFiroozbakht) &&
                     selected(conjectures, Conjecture::kNicholson) &&
                     selected(conjectures, Conjecture::kFarhadian);

  std::ofstream margins;
  if (!args.margins_path.empty()) {
    margins.open(args.margins_path, std::ios::trunc);
    if (!margins) throw std::runtime_error("cannot write margins to " + args.margins_path);
    margins << "n,p,gap";
    for (const Conjecture c : conjectures) margins << ",slack_" << to_string(c);
    margins << '\n';
  }

  const sieve::StreamSummary summary = sieve::stream_gaps(opts, [&](const PrimeGapEvent& e) {
    const conj::EventLogs logs = conj::EventLogs::for_event(e);
    if (margins.is_open()) {
      margins << e.n << ',' << e.p << ',' << e.gap;
      for (const Conjecture c : conjectures) {
        const double m = margin_lower(c, e, logs);
        margins << ',';
        if (!std::isnan(m)) margins << m;
      }
      margins << '\n';
    }
    Verdict fir, nic, far;
    for (const Conjecture c : conjectures) {
      const Verdict v = conj::check(c, e, logs);
      certificate.verdict_summary[std::string(to_string(c))].add(v.outcome);
      if (v.outcome != Outcome::kHolds) {
        if (certificate.exceptions.size() < cert::kMaxListedExceptions) {
          certificate.exceptions.push_back({c, e.n, e.p, v.outcome});
        } else {
          certificate.exceptions_truncated = true;
        }
      }
      if (c == Conjecture::kFiroozbakht) fir = v;
      if (c == Conjecture::kNicholson) nic = v;
      if (c == Conjecture::kFarhadian) far = v;
    }
    if (chain) conj::assert_implication_chain(fir, nic, far);
  });

  if (!args.checkpoint_path.empty()) {
    sieve::save_checkpoint(summary.checkpoint, args.checkpoint_path);
  }
  if (summary.interrupted) {
    std::cerr << "interrupted at p=" << summary.checkpoint.p_last << "; checkpoint "
              << (args.checkpoint_path.empty() ? "not saved (no --checkpoint path)" : "saved") << "\n";
    return 130;
  }

  certificate.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_certificate(certificate, args.out_path, /*single_line=*/false);
  std::cerr << "verified " << summary.events << " prime pairs up to " << args.limit << " in "
            << certificate.wall_time_seconds << " s\n";
  return certificate.any_fails() ? 1 : 0;
}

struct TableArgs {
  std::string table_path;
  std::string conjectures = "firoozbakht,nicholson,farhadian,kourbatov";
  std::string out_path;
};

nlohmann::ordered_json interval_verdict_json(const gaptable::IntervalVerdict& v) {
  return nlohmann::ordered_json{{"rank", v.rank},
                                {"conjecture", std::string(gaptable::to_string(v.path))},
                                {"sufficient_lhs", v.gap},
                                {"sufficient_rhs_lower", v.bound_lower},
                                {"rounding", "down"},
                                {"outcome", std::string(to_string(v.outcome))}};
}

int run_verify_table(const TableArgs& args) {
  const auto conjectures = parse_conjectures(args.conjectures);
  if (selected(conjectures, Conjecture::kCramerStrong)) {
    std::cerr << "error: cramer has no table-mode sufficient condition; use verify-direct for it\n";
    return 2;
  }
  const auto t0 = std::chrono::steady_clock::now();

  const std::vector<MaximalGapRecord> records = gaptable::load_table_file(args.table_path);
  const auto ref = gaptable::check_against_reference(records);
  if (!ref.all_match) {
    std::cerr << "error: table row at rank " << ref.first_mismatch_rank
              << " does not match the known maximal-gap record; refusing a silently edited table\n";
    return 2;
  }

  cert::VerificationCertificate certificate;
  certificate.mode = "table";
  certificate.conjectures = conjectures;
  certificate.table_digest = cert::sha256_hex_of_file(args.table_path);
  certificate.table_records = records.size();
  certificate.table_matches_reference = ref.all_match;

  // A whole-range conclusion needs the ranks to form a contiguous prefix
  // 1..N: the intervals then chain from the direct-checked range through
  // every record. Other subsets still get per-record verdicts.
  bool prefix = true;
  for (std::size_t i = 0; i < records.size(); ++i) prefix = prefix && records[i].rank == i + 1;
  certificate.valid_below_rank = prefix ? records.back().rank + 1 : 0;
  if (!prefix) std::cerr << "note: table ranks are not a 1..N prefix; certificate makes per-record claims only\n";

  for (const Conjecture c : conjectures) certificate.verdict_summary[std::string(to_string(c))] = {};

  const bool nich_path = selected(conjectures, Conjecture::kFiroozbakht) ||
                         selected(conjectures, Conjecture::kNicholson);
  const bool farh_path = selected(conjectures, Conjecture::kFarhadian);

  bool any_fails = false;
  std::vector<MaximalGapRecord> routed;
  if (nich_path) {
    const auto report = gaptable::verify_intervals(records, gaptable::TablePath::kNicholsonFiroozbakht);
    for (const auto& v : report.verdicts) {
      std::cout << interval_verdict_json(v).dump() << '\n';
      if (selected(conjectures, Conjecture::kNicholson)) {
        certificate.verdict_summary[std::string(to_string(Conjecture::kNicholson))].add(v.outcome);
      }
      if (selected(conjectures, Conjecture::kFiroozbakht)) {
        certificate.verdict_summary[std::string(to_string(Conjecture::kFiroozbakht))].add(v.outcome);
      }
    }
    routed = report.routed_to_direct;
    any_fails = any_fails || !report.all_hold;
  }
  if (farh_path) {
    const auto report = gaptable::verify_intervals(records, gaptable::TablePath::kFarhadian);
    for (const auto& v : report.verdicts) {
      std::cout << interval_verdict_json(v).dump() << '\n';
      certificate.verdict_summary[std::string(to_string(Conjecture::kFarhadian))].add(v.outcome);
    }
    routed = report.routed_to_direct;
    any_fails = any_fails || !report.all_hold;
  }
  if (selected(conjectures, Conjecture::kKourbatov)) {
    for (const auto& v : gaptable::verify_kourbatov_records(records)) {
      std::cout << nlohmann::ordered_json{{"rank", v.rank},
                                          {"conjecture", "kourbatov"},
                                          {"sufficient_rhs_lower", v.bound_lower},
                                          {"rounding", "down"},
                                          {"outcome", std::string(to_string(v.outcome))}}
                       .dump()
                << '\n';
      certificate.verdict_summary[std::string(to_string(Conjecture::kKourbatov))].add(v.outcome);
      any_fails = any_fails || v.outcome == Outcome::kFails;
    }
  }

  // Direct sieve check of the primes below the sufficient-condition range
  // (the records routed out of the interval argument cover [2, 89)).
  if (!routed.empty() || prefix) {
    sieve::StreamOptions opts;
    opts.limit = 97;  // closes the pair (89, 97)
    sieve::stream_gaps(opts, [&](const PrimeGapEvent& e) {
      if (e.p >= gaptable::kDirectCheckBelow) return;
      const conj::EventLogs logs = conj::EventLogs::for_event(e);
      for (const Conjecture c : conjectures) {
        const Verdict v = conj::check(c, e, logs);
        certificate.verdict_summary[std::string(to_string(c))].add(v.outcome);
        if (v.outcome != Outcome::kHolds) certificate.exceptions.push_back({c, e.n, e.p, v.outcome});
        any_fails = any_fails || v.outcome == Outcome::kFails;
      }
    });
  }

  certificate.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_certificate(certificate, args.out_path, /*single_line=*/true);
  if (certificate.valid_below_rank != 0 && !any_fails) {
    std::cerr << "conclusion: selected conjectures hold for all primes below the start of maximal gap #"
              << certificate.valid_below_rank << " (exceptions listed in the certificate)\n";
  }
  return any_fails ? 1 : 0;
}

struct FindArgs {
  std::uint64_t limit = 0;
  std::string checkpoint_path;
  std::string out_path;
};

int run_find_gaps(const FindArgs& args) {
  if (args.limit < 3) {
    std::cerr << "error: --limit must be at least 3\n";
    return 2;
  }
  if (args.limit > kLimitCap) {
    std::cerr << "error: --limit is capped at 2^63\n";
    return 2;
  }

  sieve::StreamOptions opts;
  opts.limit = args.limit;
  opts.stop = &g_stop;
  if (!args.checkpoint_path.empty() && std::filesystem::exists(args.checkpoint_path)) {
    opts.resume = sieve::load_checkpoint(args.checkpoint_path);
    std::cerr << "resuming after p=" << opts.resume->p_last << "\n";
  }
  opts.on_checkpoint = [&](const sieve::Checkpoint& c) {
    if (!args.checkpoint_path.empty()) sieve::save_checkpoint(c, args.checkpoint_path);
    std::cerr << "progress: p=" << c.p_last << " records=" << c.records_so_far.size() << "\n";
  };

  const sieve::StreamSummary summary =
      sieve::stream_gaps(opts, [](const PrimeGapEvent&) {}, /*emit_start_below=*/true);
  if (!args.checkpoint_path.empty()) sieve::save_checkpoint(summary.checkpoint, args.checkpoint_path);
  if (summary.interrupted) {
    std::cerr << "interrupted at p=" << summary.checkpoint.p_last << "\n";
    return 130;
  }

  std::ostringstream csv;
  csv << "rank,gap,start_prime,start_index\n";
  for (const auto& r : summary.checkpoint.records_so_far) {
    csv << r.rank << ',' << r.gap << ',' << r.start_prime << ',' << r.start_index << '\n';
  }
  if (!args.out_path.empty()) {
    std::ofstream out(args.out_path, std::ios::trunc);
    if (!out) {
      std::cerr << "error: cannot write " << args.out_path << "\n";
      return 2;
    }
    out << csv.str();
  } else {
    std::cout << csv.str();
  }
  std::cerr << "found " << summary.checkpoint.records_so_far.size() << " maximal gaps below " << args.limit
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  std::signal(SIGINT, handle_signal);
  std::signal(SIGTERM, handle_signal);

  CLI::App app{"prime gap conjecture verification with certified arithmetic"};
  app.set_version_flag("--version", std::string(gapcert::kToolVersion));
  app.require_subcommand(1);

  DirectArgs direct;
  auto* vd = app.add_subcommand("verify-direct", "check conjectures on every prime pair up to a limit");
  vd->add_option("--limit", direct.limit, "verify prime pairs with both ends <= limit")->required();
  vd->add_option("--conjectures", direct.conjectures,
                 "comma list of firoozbakht,nicholson,farhadian,cramer,kourbatov");
  vd->add_option("--checkpoint", direct.checkpoint_path, "checkpoint file to resume from / write to");
  vd->add_option("--out", direct.out_path, "write the certificate JSON here instead of stdout");
  vd->add_option("--margins", direct.margins_path,
                 "write a per-event slack CSV (certified lower bound of rhs - lhs) for external plotting");

  TableArgs table;
  auto* vt = app.add_subcommand("verify-table", "rerun the interval argument over a maximal-gap table");
  vt->add_option("--table", table.table_path, "CSV table rank,gap,start_prime,start_index")->required();
  vt->add_option("--conjectures", table.conjectures,
                 "comma list of firoozbakht,nicholson,farhadian,kourbatov");
  vt->add_option("--out", table.out_path, "write the certificate JSON here instead of stdout");

  FindArgs find;
  auto* fg = app.add_subcommand("find-gaps", "discover maximal prime gaps up to a limit");
  fg->add_option("--limit", find.limit, "report records whose start prime is below this")->required();
  fg->add_option("--checkpoint", find.checkpoint_path, "checkpoint file to resume from / write to");
  fg->add_option("--out", find.out_path, "write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (vd->parsed()) return run_verify_direct(direct);
    if (vt->parsed()) return run_verify_table(table);
    if (fg->parsed()) return run_find_gaps(find);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
