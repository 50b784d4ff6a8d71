#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace fgdual {

// Caller misuse: bad ranks, non-reduced input, malformed text.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An enumeration or iteration budget ran out before an answer was reached.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An iterative numeric scheme failed to converge within its cap.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A generator map was certified not to be an automorphism.
struct NotAnAutomorphismError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The boundary oracle could not stabilize; never a wrong answer.
struct InconclusiveOracle : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : UsageError {
  int line = 0;
  int column = 0;
  ParseError(const std::string& msg, int line_, int column_)
      : UsageError("line " + std::to_string(line_) + ", col " +
                   std::to_string(column_) + ": " + msg),
        line(line_),
        column(column_) {}
};

// Counts word evaluations; shared across the stages of one computation.
class Budget {
 public:
  explicit Budget(std::uint64_t limit) : remaining_(limit) {}

  void charge(std::uint64_t n) {
    if (n > remaining_) {
      remaining_ = 0;
      throw ResourceError("enumeration budget exceeded");
    }
    remaining_ -= n;
  }

  bool can_afford(std::uint64_t n) const { return n <= remaining_; }
  std::uint64_t remaining() const { return remaining_; }

 private:
  std::uint64_t remaining_;
};

}  // namespace fgdual
