#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "holdout/problem.hpp"

namespace holdout {

// Hard bounds on a single run. The proofs need none; software does.
struct Limits {
  std::uint64_t max_g_steps = 10'000;
  std::uint32_t max_value_bits = 4'096;
  Natural floor = 1;  // early-exit threshold; 1 disables it

  friend bool operator==(const Limits&, const Limits&) = default;
};

void validate(const Limits& limits);

struct ReachedOne {
  std::uint64_t g_steps = 0;
  friend bool operator==(const ReachedOne&, const ReachedOne&) = default;
};

struct EnteredCycle {
  std::vector<Natural> cycle;  // exact orbit, rotated to start at its minimum
  std::uint64_t entry_step = 0;
  friend bool operator==(const EnteredCycle&, const EnteredCycle&) = default;
};

struct DroppedBelowFloor {
  Natural value;
  std::uint64_t g_steps = 0;
  friend bool operator==(const DroppedBelowFloor&, const DroppedBelowFloor&) = default;
};

struct AbortedSteps {
  friend bool operator==(const AbortedSteps&, const AbortedSteps&) = default;
};

struct AbortedSize {
  friend bool operator==(const AbortedSize&, const AbortedSize&) = default;
};

// Factoring budget ran out mid-run; distinct from a size abort.
struct AbortedFactor {
  std::string reason;
  friend bool operator==(const AbortedFactor&, const AbortedFactor&) = default;
};

using Classification = std::variant<ReachedOne, EnteredCycle, DroppedBelowFloor, AbortedSteps,
                                    AbortedSize, AbortedFactor>;

std::string_view classification_key(const Classification& c);

bool is_anomalous(const Classification& c);  // cycle or any abort

struct TrajectoryRecord {
  Natural start;
  Classification classification;
  Natural max_value;
  std::uint64_t g_steps_taken = 0;
  std::optional<std::uint64_t> stopping_time;  // first g-step index with iterate < start
  std::optional<std::vector<Natural>> iterates;  // recorded on request only

  friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

// Iterates g_step from n. Reaching 1 is terminal; a repeated iterate yields
// the exact orbit; limit breaches abort. The start counts as iterate 0.
TrajectoryRecord run_trajectory(const ProblemSpec& spec, const Natural& n, const Limits& limits,
                                bool record_iterates, const FactorPolicy& policy = {});

// run_trajectory's classification without the iterate list. Requires
// n >= limits.floor.
Classification classify(const ProblemSpec& spec, const Natural& n, const Limits& limits,
                        const FactorPolicy& policy = {});

// Smallest k <= max_t_steps with t_step^k(n) < n, if any. Requires smooth n.
std::optional<std::uint64_t> t_stopping_steps(const ProblemSpec& spec, const Natural& n,
                                              std::uint64_t max_t_steps,
                                              const FactorPolicy& policy = {});

}  // namespace holdout
