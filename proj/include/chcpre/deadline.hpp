#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace chcpre {

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("timeout") {}
};

/// Installs a wall-clock deadline for long-running loops on this thread.
class DeadlineScope {
 public:
  explicit DeadlineScope(std::optional<std::chrono::steady_clock::time_point> at);
  ~DeadlineScope();
  DeadlineScope(const DeadlineScope&) = delete;
  DeadlineScope& operator=(const DeadlineScope&) = delete;

 private:
  std::optional<std::chrono::steady_clock::time_point> previous_;
};

/// Throws Timeout once the innermost deadline has passed.
void check_deadline();

}  // namespace chcpre
