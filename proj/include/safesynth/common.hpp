#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <stop_token>
#include <string>

namespace safesynth {

/// min_unsat_core called on a satisfiable query.
struct CorePreconditionError : std::logic_error {
  using std::logic_error::logic_error;
};

/// Iteration, time or memory budget exhausted.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A cooperative stop request was observed.
struct Cancelled : std::runtime_error {
  Cancelled() : std::runtime_error("cancelled") {}
};

/// Time limit plus optional stop token, polled at iteration boundaries.
class Budget {
public:
  Budget() = default;
  explicit Budget(int64_t time_limit_ms, std::stop_token stop = {});

  void set_stop(std::stop_token stop) { stop_ = std::move(stop); }
  const std::stop_token &stop() const { return stop_; }
  bool expired() const;
  /// Throws Cancelled or BudgetExceeded.
  void check(const char *where = "") const;
  int64_t elapsed_ms() const;
  /// Budget with the remaining time of this one, capped at ms (if ms >= 0).
  Budget sub(int64_t ms) const;

private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point deadline_ = std::chrono::steady_clock::time_point::max();
  std::stop_token stop_;
};

/// Process-wide solver call counters, reported in run statistics.
struct Counters {
  std::atomic<uint64_t> sat_calls{0};
  std::atomic<uint64_t> qbf_calls{0};
  static Counters &global();
};

} // namespace safesynth
