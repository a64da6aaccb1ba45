#pragma once

#include <stdexcept>

namespace holdout {

// Caller broke an operation's precondition (e.g. t_step on a non-smooth
// value, a divisor-set spec where a holdout rule is required).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The factoring effort budget ran out. The answer is never wrong; rerun with
// a larger budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed problem text, numbers, or flag values.
class ParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace holdout
