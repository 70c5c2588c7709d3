#pragma once

// Segmented sieve of Eratosthenes streaming consecutive primes with exact
// 1-based indices. Segments hold odd-number composite flags and may be sieved
// concurrently; a sequential stitcher walks them in order, pairs consecutive
// primes into gap events, tracks record gaps, and emits checkpoints.

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

#include "gapcert/primality.hpp"
#include "gapcert/types.hpp"

namespace gapcert::sieve {

struct ResumeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RangeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::uint32_t kCheckpointFormatVersion = 1;
inline constexpr std::uint64_t kDefaultSegmentOdds = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultCheckpointStride = 1'000'000'000;

struct Checkpoint {
  std::uint32_t format_version = kCheckpointFormatVersion;
  std::uint64_t p_last = 0;  // last prime fully processed
  std::uint64_t n_last = 0;  // its 1-based index
  std::vector<MaximalGapRecord> records_so_far;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

inline void to_json(nlohmann::json& j, const Checkpoint& c) {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : c.records_so_far) {
    recs.push_back({{"rank", r.rank}, {"gap", r.gap}, {"start_prime", r.start_prime}, {"start_index", r.start_index}});
  }
  j = nlohmann::json{{"format_version", c.format_version},
                     {"p_last", c.p_last},
                     {"n_last", c.n_last},
                     {"records_so_far", std::move(recs)}};
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  Checkpoint c;
  c.format_version = j.at("format_version").get<std::uint32_t>();
  c.p_last = j.at("p_last").get<std::uint64_t>();
  c.n_last = j.at("n_last").get<std::uint64_t>();
  for (const auto& r : j.at("records_so_far")) {
    c.records_so_far.push_back({r.at("rank").get<std::uint64_t>(), r.at("gap").get<std::uint64_t>(),
                                r.at("start_prime").get<std::uint64_t>(), r.at("start_index").get<std::uint64_t>()});
  }
  return c;
}

inline void save_checkpoint(const Checkpoint& c, const std::string& path) {
  nlohmann::json j = c;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint file: " + path);
  out << j.dump(2) << '\n';
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ResumeError("cannot open checkpoint file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    return checkpoint_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ResumeError(std::string("corrupt checkpoint: ") + e.what());
  }
}

inline unsigned default_thread_count() {
  if (const char* env = std::getenv("GAPCERT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

struct StreamOptions {
  std::uint64_t limit = 0;
  std::optional<Checkpoint> resume;
  unsigned threads = 0;  // 0 = default_thread_count()
  std::uint64_t segment_odds = kDefaultSegmentOdds;
  std::uint64_t checkpoint_stride = kDefaultCheckpointStride;  // numbers scanned
  std::function<void(const Checkpoint&)> on_checkpoint;
  const std::atomic<bool>* stop = nullptr;  // graceful-shutdown request
};

struct StreamSummary {
  Checkpoint checkpoint;
  std::uint64_t events = 0;
  bool interrupted = false;
};

inline std::uint64_t isqrt_u64(std::uint64_t n) {
  std::uint64_t r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
  while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

// All primes <= limit by a plain odd-only sieve; used for base primes and
// small tables.
inline std::vector<std::uint64_t> simple_primes(std::uint64_t limit) {
  std::vector<std::uint64_t> primes;
  if (limit < 2) return primes;
  primes.push_back(2);
  if (limit < 3) return primes;
  const std::uint64_t count = (limit - 1) / 2;  // odds 3,5,... => value = 2i+3
  std::vector<std::uint64_t> words((count + 63) / 64, 0);
  const auto is_set = [&](std::uint64_t i) { return (words[i >> 6] >> (i & 63)) & 1; };
  for (std::uint64_t i = 0;; ++i) {
    const std::uint64_t v = 2 * i + 3;
    if (v * v > limit) break;
    if (is_set(i)) continue;
    for (std::uint64_t j = (v * v - 3) / 2; j < count; j += v) words[j >> 6] |= std::uint64_t{1} << (j & 63);
  }
  for (std::uint64_t i = 0; i < count; ++i) {
    if (!is_set(i)) primes.push_back(2 * i + 3);
  }
  return primes;
}

// 1-based indexed prime source: prime(n) is the n-th prime.
class PrimeTable {
 public:
  static PrimeTable up_to(std::uint64_t limit) { return PrimeTable(simple_primes(limit)); }

  static PrimeTable first_n(std::size_t count) {
    // p_n < n (ln n + ln ln n) for n >= 6
    std::uint64_t bound = 100;
    if (count >= 6) {
      const double n = static_cast<double>(count);
      bound = static_cast<std::uint64_t>(n * (std::log(n) + std::log(std::log(n)))) + 16;
    }
    std::vector<std::uint64_t> primes = simple_primes(bound);
    while (primes.size() < count) {
      bound *= 2;
      primes = simple_primes(bound);
    }
    primes.resize(count);
    return PrimeTable(std::move(primes));
  }

  std::uint64_t prime(std::uint64_t index_1based) const {
    if (index_1based == 0 || index_1based > primes_.size()) {
      throw std::out_of_range("prime index " + std::to_string(index_1based) + " outside table of " +
                              std::to_string(primes_.size()));
    }
    return primes_[index_1based - 1];
  }

  std::size_t size() const { return primes_.size(); }

 private:
  explicit PrimeTable(std::vector<std::uint64_t> p) : primes_(std::move(p)) {}
  std::vector<std::uint64_t> primes_;
};

namespace detail {

// Composite flags for the odd numbers first_odd, first_odd+2, ...
struct SegmentBitmap {
  std::uint64_t first_odd = 0;
  std::uint64_t odd_count = 0;
  std::vector<std::uint64_t> words;

  void sieve(const std::vector<std::uint64_t>& base_primes) {
    words.assign((odd_count + 63) / 64, 0);
    const std::uint64_t seg_end = first_odd + 2 * odd_count;  // exclusive
    for (const std::uint64_t q : base_primes) {
      if (q == 2) continue;
      const unsigned __int128 qq = static_cast<unsigned __int128>(q) * q;
      if (qq >= seg_end) break;
      std::uint64_t start = static_cast<std::uint64_t>(qq);
      if (start < first_odd) {
        std::uint64_t m = ((first_odd + q - 1) / q) * q;
        if ((m & 1) == 0) m += q;
        start = m;
      }
      if (start >= seg_end) continue;
      for (std::uint64_t idx = (start - first_odd) / 2; idx < odd_count; idx += q) {
        words[idx >> 6] |= std::uint64_t{1} << (idx & 63);
      }
    }
  }

  template <class Fn>
  void for_each_prime(Fn&& fn) const {
    for (std::uint64_t w = 0; w < words.size(); ++w) {
      std::uint64_t bits = ~words[w];
      // mask out flags past odd_count in the final word
      if (w == words.size() - 1 && (odd_count & 63) != 0) {
        bits &= (std::uint64_t{1} << (odd_count & 63)) - 1;
      }
      while (bits != 0) {
        const int tz = std::countr_zero(bits);
        bits &= bits - 1;
        fn(first_odd + 2 * (64 * w + static_cast<std::uint64_t>(tz)));
      }
    }
  }
};

struct RecordTracker {
  std::uint64_t max_gap = 0;
  std::vector<MaximalGapRecord> records;

  void init_from(const std::vector<MaximalGapRecord>& existing) {
    records = existing;
    max_gap = records.empty() ? 0 : records.back().gap;
  }

  void feed(const PrimeGapEvent& e) {
    if (e.gap > max_gap) {
      max_gap = e.gap;
      records.push_back({records.size() + 1, e.gap, e.p, e.n});
    }
  }
};

inline void validate_resume(const Checkpoint& c, std::uint64_t limit) {
  if (c.format_version != kCheckpointFormatVersion) {
    throw ResumeError("checkpoint format_version " + std::to_string(c.format_version) + " does not match " +
                      std::to_string(kCheckpointFormatVersion));
  }
  if (c.p_last < 2 || c.n_last < 1) throw ResumeError("checkpoint position is before the first prime");
  if (!is_prime_u64(c.p_last)) {
    throw ResumeError("checkpoint p_last " + std::to_string(c.p_last) + " is not prime");
  }
  std::uint64_t prev_rank = 0, prev_gap = 0, prev_start = 0;
  for (const auto& r : c.records_so_far) {
    if (r.rank <= prev_rank || r.gap <= prev_gap || r.start_prime <= prev_start || r.start_prime > c.p_last ||
        r.start_index > c.n_last) {
      throw ResumeError("checkpoint records are inconsistent");
    }
    prev_rank = r.rank;
    prev_gap = r.gap;
    prev_start = r.start_prime;
  }
  if (limit < c.p_last) {
    throw RangeError("limit " + std::to_string(limit) + " is below the checkpoint position " +
                     std::to_string(c.p_last));
  }
}

}  // namespace detail

// Streams every PrimeGapEvent with p_next <= limit in increasing index order.
// When opts.resume is set, continues after the checkpointed prime; the
// concatenation of a prefix run and its resumed continuation is bit-identical
// to a single full run.
//
// The sink is invoked as sink(const PrimeGapEvent&). Internal mode: when
// emit_start_below is true, events are instead emitted while p < limit (the
// sieve then runs past limit far enough to close the final gap), which is
// what record discovery needs.
template <class Sink>
StreamSummary stream_gaps(const StreamOptions& opts, Sink&& sink, bool emit_start_below = false) {
  if (opts.limit < 3) throw RangeError("limit must be at least 3");
  if (opts.resume) detail::validate_resume(*opts.resume, opts.limit);

  const unsigned threads = opts.threads != 0 ? opts.threads : default_thread_count();
  const std::uint64_t segment_odds = std::max<std::uint64_t>(opts.segment_odds, 64);

  StreamSummary summary;
  detail::RecordTracker tracker;

  std::uint64_t p_prev, n_prev, scan_base;
  if (opts.resume) {
    p_prev = opts.resume->p_last;
    n_prev = opts.resume->n_last;
    tracker.init_from(opts.resume->records_so_far);
    scan_base = p_prev + 1;
  } else {
    p_prev = 0;
    n_prev = 0;
    scan_base = 2;
  }

  // In start-below mode the sieve must look past limit to close the last gap
  // that begins below it. Gaps below 2^64 never exceed 1550; the slack leaves
  // generous room and grows if a pathological range ever exhausts it.
  std::uint64_t slack = emit_start_below ? 4096 : 0;

  for (bool complete = false; !complete;) {
    const std::uint64_t bound =
        emit_start_below ? (opts.limit > std::numeric_limits<std::uint64_t>::max() - slack
                                ? std::numeric_limits<std::uint64_t>::max()
                                : opts.limit + slack)
                         : opts.limit;
    const std::vector<std::uint64_t> base = simple_primes(isqrt_u64(bound));

    std::uint64_t next_checkpoint_at = scan_base + opts.checkpoint_stride;
    bool done = false;

    std::uint64_t cursor = scan_base <= 3 ? 3 : (scan_base | 1);
    if (!opts.resume && p_prev == 0) {
      p_prev = 2;
      n_prev = 1;
      if (opts.limit < 3) done = true;
    }

    std::vector<detail::SegmentBitmap> round(threads);
    std::vector<std::future<void>> jobs(threads);

    while (!done && cursor <= bound) {
      // launch up to `threads` segments
      unsigned launched = 0;
      std::uint64_t c = cursor;
      for (; launched < threads && c <= bound; ++launched) {
        auto& seg = round[launched];
        seg.first_odd = c;
        seg.odd_count = std::min(segment_odds, (bound - c) / 2 + 1);
        jobs[launched] = std::async(std::launch::async, [&seg, &base] { seg.sieve(base); });
        c += 2 * seg.odd_count;
      }
      // stitch in order
      for (unsigned s = 0; s < launched; ++s) {
        jobs[s].get();
        if (done) continue;  // drain remaining futures
        const auto& seg = round[s];
        seg.for_each_prime([&](std::uint64_t p) {
          if (done) return;
          if (!emit_start_below && p > opts.limit) {
            done = true;
            return;
          }
          const PrimeGapEvent event{n_prev, p_prev, p, p - p_prev};
          if (emit_start_below && event.p >= opts.limit) {
            done = true;
            return;
          }
          sink(event);
          tracker.feed(event);
          ++summary.events;
          p_prev = p;
          ++n_prev;
        });
        if (done) continue;
        cursor = seg.first_odd + 2 * seg.odd_count;
        if (opts.on_checkpoint && cursor >= next_checkpoint_at) {
          opts.on_checkpoint(Checkpoint{kCheckpointFormatVersion, p_prev, n_prev, tracker.records});
          while (next_checkpoint_at <= cursor) next_checkpoint_at += opts.checkpoint_stride;
        }
        if (opts.stop != nullptr && opts.stop->load(std::memory_order_relaxed)) {
          summary.interrupted = true;
          done = true;
        }
      }
    }

    if (!emit_start_below || done || summary.interrupted) {
      complete = true;
    } else {
      // Ran out of sieve room before closing the last gap below limit.
      scan_base = cursor;
      slack *= 2;
      complete = false;
      if (slack == 0 || bound == std::numeric_limits<std::uint64_t>::max()) complete = true;
    }
  }

  summary.checkpoint = Checkpoint{kCheckpointFormatVersion, p_prev, n_prev, tracker.records};
  return summary;
}

// Every maximal-gap record whose start prime lies below limit, in rank order.
inline std::vector<MaximalGapRecord> find_maximal_gaps(std::uint64_t limit, unsigned threads = 0) {
  StreamOptions opts;
  opts.limit = limit;
  opts.threads = threads;
  const StreamSummary s = stream_gaps(opts, [](const PrimeGapEvent&) {}, /*emit_start_below=*/true);
  return s.checkpoint.records_so_far;
}

}  // namespace gapcert::sieve
