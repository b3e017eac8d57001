#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

namespace cidiff {

/// Raised by long-running computations once their time budget is spent.
class TimeoutError : public std::runtime_error {
 public:
  TimeoutError() : std::runtime_error("time budget exceeded") {}
};

/// A point in time after which cooperative computations abort.
/// A default-constructed deadline never expires.
class Deadline {
 public:
  using Clock = std::chrono::steady_clock;

  Deadline() = default;

  static Deadline never() { return Deadline{}; }
  static Deadline after(Clock::duration budget) {
    return Deadline{Clock::now() + budget};
  }

  bool bounded() const { return at_.has_value(); }
  bool expired() const { return at_ && Clock::now() >= *at_; }

  void check() const {
    if (expired()) throw TimeoutError{};
  }

 private:
  explicit Deadline(Clock::time_point at) : at_(at) {}

  std::optional<Clock::time_point> at_;
};

}  // namespace cidiff
