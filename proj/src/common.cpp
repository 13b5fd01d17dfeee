#include "safesynth/common.hpp"

namespace safesynth {

Budget::Budget(int64_t time_limit_ms, std::stop_token stop) : stop_(std::move(stop)) {
  if (time_limit_ms >= 0)
    deadline_ = start_ + std::chrono::milliseconds(time_limit_ms);
}

bool Budget::expired() const {
  return stop_.stop_requested() || std::chrono::steady_clock::now() > deadline_;
}

void Budget::check(const char *where) const {
  if (stop_.stop_requested())
    throw Cancelled();
  if (std::chrono::steady_clock::now() > deadline_)
    throw BudgetExceeded(std::string("time budget exceeded") + (*where ? " in " : "") + where);
}

int64_t Budget::elapsed_ms() const {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() -
                                                               start_)
      .count();
}

Budget Budget::sub(int64_t ms) const {
  Budget b = *this;
  b.start_ = std::chrono::steady_clock::now();
  if (ms >= 0) {
    auto cap = b.start_ + std::chrono::milliseconds(ms);
    if (cap < b.deadline_)
      b.deadline_ = cap;
  }
  return b;
}

Counters &Counters::global() {
  static Counters c;
  return c;
}

} // namespace safesynth
