#include "holdout/trajectory.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "holdout/errors.hpp"

namespace holdout {

void validate(const Limits& limits) {
  if (limits.max_g_steps < 1) throw ContractError("limits: max_g_steps must be >= 1");
  if (limits.max_value_bits < 8) throw ContractError("limits: max_value_bits must be >= 8");
  if (limits.floor < 1) throw ContractError("limits: floor must be >= 1");
}

std::string_view classification_key(const Classification& c) {
  return std::visit(
      [](const auto& v) -> std::string_view {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, ReachedOne>) return "reached_one";
        else if constexpr (std::is_same_v<V, EnteredCycle>) return "entered_cycle";
        else if constexpr (std::is_same_v<V, DroppedBelowFloor>) return "dropped_below_floor";
        else if constexpr (std::is_same_v<V, AbortedSteps>) return "aborted_steps";
        else if constexpr (std::is_same_v<V, AbortedSize>) return "aborted_size";
        else return "aborted_factor";
      },
      c);
}

bool is_anomalous(const Classification& c) {
  return !std::holds_alternative<ReachedOne>(c) && !std::holds_alternative<DroppedBelowFloor>(c);
}

namespace {

std::vector<Natural> rotate_to_min(std::vector<Natural> orbit) {
  const auto min_it = std::min_element(orbit.begin(), orbit.end());
  std::rotate(orbit.begin(), orbit.begin() + (min_it - orbit.begin()), orbit.end());
  return orbit;
}

TrajectoryRecord run_impl(const ProblemSpec& spec, const Natural& n, const Limits& limits,
                          bool record_iterates, const FactorPolicy& policy) {
  validate(limits);
  if (n < 1) throw ContractError("trajectory: start must be >= 1");

  TrajectoryRecord record;
  record.start = n;
  record.max_value = n;

  std::vector<Natural> trace{n};
  std::map<Natural, std::uint64_t> position{{n, 0}};

  const auto finish = [&](Classification cls, std::uint64_t steps) {
    record.classification = std::move(cls);
    record.g_steps_taken = steps;
    if (record_iterates) record.iterates = std::move(trace);
    return record;
  };

  if (bit_length(n) > limits.max_value_bits) return finish(AbortedSize{}, 0);
  if (n == 1) return finish(ReachedOne{0}, 0);
  if (n < limits.floor) return finish(DroppedBelowFloor{n, 0}, 0);

  Natural current = n;
  for (std::uint64_t step = 1;; ++step) {
    if (step > limits.max_g_steps) return finish(AbortedSteps{}, step - 1);

    Natural next;
    try {
      next = g_step(spec, current, policy);
    } catch (const BudgetError& e) {
      return finish(AbortedFactor{e.what()}, step - 1);
    }

    trace.push_back(next);
    if (next > record.max_value) record.max_value = next;
    if (!record.stopping_time && next < record.start) record.stopping_time = step;

    if (bit_length(next) > limits.max_value_bits) return finish(AbortedSize{}, step);
    if (next == 1) return finish(ReachedOne{step}, step);
    if (next < limits.floor) return finish(DroppedBelowFloor{next, step}, step);

    if (const auto seen = position.find(next); seen != position.end()) {
      const std::uint64_t entry = seen->second;
      std::vector<Natural> orbit(trace.begin() + static_cast<std::ptrdiff_t>(entry),
                                 trace.end() - 1);
      return finish(EnteredCycle{rotate_to_min(std::move(orbit)), entry}, step);
    }
    position.emplace(next, step);
    current = std::move(next);
  }
}

}  // namespace

TrajectoryRecord run_trajectory(const ProblemSpec& spec, const Natural& n, const Limits& limits,
                                bool record_iterates, const FactorPolicy& policy) {
  return run_impl(spec, n, limits, record_iterates, policy);
}

Classification classify(const ProblemSpec& spec, const Natural& n, const Limits& limits,
                        const FactorPolicy& policy) {
  if (n < limits.floor) throw ContractError("classify: n must be >= limits.floor");
  return run_impl(spec, n, limits, false, policy).classification;
}

std::optional<std::uint64_t> t_stopping_steps(const ProblemSpec& spec, const Natural& n,
                                              std::uint64_t max_t_steps,
                                              const FactorPolicy& policy) {
  Natural value = n;
  for (std::uint64_t k = 1; k <= max_t_steps; ++k) {
    value = t_step(spec, value, policy);
    if (value < n) return k;
  }
  return std::nullopt;
}

}  // namespace holdout
