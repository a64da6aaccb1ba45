#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "holdout/trajectory.hpp"

namespace holdout {

struct Anomaly {
  Natural n;
  Classification classification;

  friend bool operator==(const Anomaly&, const Anomaly&) = default;
};

// Count key used when a below-floor drop is certified convergent by the
// ascending induction (lo == 1 runs only).
inline constexpr std::string_view kConvergedByInduction = "converged_by_induction";

struct VerificationReport {
  ProblemSpec spec;
  Natural lo;
  Natural hi;
  std::map<std::string, std::uint64_t> counts;  // classification key -> count
  std::vector<Anomaly> anomalies;               // ascending n; cycles and aborts only
  // Largest stopping time seen and the n attaining it (smallest such n on ties).
  std::optional<std::pair<Natural, std::uint64_t>> max_stopping_time;
  double elapsed_seconds = 0.0;
  std::uint32_t worker_count = 1;
  std::uint64_t seed = 0;

  std::uint64_t converged_count() const;
  std::uint64_t total_count() const;

  friend bool operator==(const VerificationReport&, const VerificationReport&) = default;
};

// Classifies every n in [lo, hi], distributing blocks over workers with a
// deterministic ascending merge. For lo == 1 each n runs with floor = n and
// a drop below n is certified convergent by induction (counted under
// kConvergedByInduction); for lo > 1 each n runs with floor = lo and drops
// stand as their own outcome.
VerificationReport verify_range(const ProblemSpec& spec, const Natural& lo, const Natural& hi,
                                const Limits& limits, std::uint32_t workers = 1,
                                std::uint64_t seed = 0);

struct CycleReport {
  ProblemSpec spec;
  std::vector<Natural> cycle;  // orbit rotated to start at its minimal element
  std::uint64_t g_length = 0;
  std::optional<std::uint64_t> t_length;  // combined-step length (holdout rules)

  friend bool operator==(const CycleReport&, const CycleReport&) = default;
};

bool is_trivial_cycle(const CycleReport& report);  // passes through 1

// Enumerates every g-cycle whose minimal element is <= element_bound by
// exhaustive classification, plus the trivial orbit through 1, deduplicated
// by minimal element and sorted by it.
std::vector<CycleReport> find_cycles(const ProblemSpec& spec, const Natural& element_bound,
                                     const Limits& limits, const FactorPolicy& policy = {});

enum class TwoCycleRejection { NotSmooth, CofactorRetained, LoopFailed };

std::string_view two_cycle_rejection_key(TwoCycleRejection r);

struct TwoCycleCandidate {
  Natural n;
  Natural cofactor;
  std::optional<TwoCycleRejection> rejected;

  friend bool operator==(const TwoCycleCandidate&, const TwoCycleCandidate&) = default;
};

struct TwoCycleScan {
  std::vector<std::pair<Natural, Natural>> solutions;  // surviving (n, cofactor)
  std::vector<TwoCycleCandidate> candidates;           // every candidate with its outcome

  friend bool operator==(const TwoCycleScan&, const TwoCycleScan&) = default;
};

// Solves the two-combined-step loop equation c^2 n + c + 1 = k n over the
// divisors n of c + 1, then filters: n smooth, cofactor k free of retained
// primes, and the loop realized by t_step. Finite holdout rules only.
TwoCycleScan two_cycle_analytic(const ProblemSpec& spec, const FactorPolicy& policy = {});

struct SurveyConfig {
  std::vector<Natural> multipliers;
  std::vector<Natural> pool;  // candidate holdout primes
  std::size_t max_set_size = 2;
  Natural verify_hi = 10'000;
  Limits limits;
  std::uint32_t workers = 1;
  std::uint64_t seed = 0;
};

struct SurveyRow {
  ProblemSpec spec;
  std::optional<Triviality> skipped;
  std::optional<VerificationReport> report;
  std::vector<CycleReport> cycles;
  std::optional<std::string> error;  // quarantined per-problem failure

  friend bool operator==(const SurveyRow&, const SurveyRow&) = default;
};

bool survey_row_clean(const SurveyRow& row);  // no anomalies, no nontrivial cycles, no error

struct SurveyReport {
  SurveyConfig config;
  std::vector<SurveyRow> rows;
};

// Forms every holdout problem from a multiplier and a pool subset of size
// 1..max_set_size, skipping trivial ones with the logged reason and running
// verify_range plus find_cycles on the rest.
SurveyReport survey(const SurveyConfig& config);

}  // namespace holdout
