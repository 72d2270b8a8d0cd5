#include "chcpre/deadline.hpp"

namespace chcpre {

namespace {
thread_local std::optional<std::chrono::steady_clock::time_point> current;
thread_local unsigned tick = 0;
}  // namespace

DeadlineScope::DeadlineScope(std::optional<std::chrono::steady_clock::time_point> at)
    : previous_(current) {
  current = at;
}

DeadlineScope::~DeadlineScope() { current = previous_; }

void check_deadline() {
  if (!current) return;
  if ((++tick & 15u) != 0) return;
  if (std::chrono::steady_clock::now() >= *current) throw Timeout();
}

}  // namespace chcpre
