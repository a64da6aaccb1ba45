#include "holdout/verify.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <thread>
#include <variant>

#include "holdout/errors.hpp"

namespace holdout {
namespace {

// Fixed scheduling unit. Blocks are merged in index order, so reports do not
// depend on which worker ran which block.
constexpr std::uint64_t kBlockSpan = 4096;

struct BlockPartial {
  std::map<std::string, std::uint64_t> counts;
  std::vector<Anomaly> anomalies;
  std::optional<std::pair<Natural, std::uint64_t>> max_stopping;
};

void absorb(BlockPartial& into, const BlockPartial& from) {
  for (const auto& [key, count] : from.counts) into.counts[key] += count;
  into.anomalies.insert(into.anomalies.end(), from.anomalies.begin(), from.anomalies.end());
  if (from.max_stopping &&
      (!into.max_stopping || from.max_stopping->second > into.max_stopping->second)) {
    into.max_stopping = from.max_stopping;
  }
}

}  // namespace

std::uint64_t VerificationReport::converged_count() const {
  std::uint64_t total = 0;
  if (auto it = counts.find(std::string(classification_key(Classification{ReachedOne{}})));
      it != counts.end()) {
    total += it->second;
  }
  if (auto it = counts.find(std::string(kConvergedByInduction)); it != counts.end()) {
    total += it->second;
  }
  return total;
}

std::uint64_t VerificationReport::total_count() const {
  std::uint64_t total = 0;
  for (const auto& [key, count] : counts) total += count;
  return total;
}

VerificationReport verify_range(const ProblemSpec& spec, const Natural& lo, const Natural& hi,
                                const Limits& limits, std::uint32_t workers, std::uint64_t seed) {
  validate(limits);
  if (lo < 1) throw ContractError("verify_range: lo must be >= 1");
  if (hi < lo) throw ContractError("verify_range: hi must be >= lo");
  if (workers < 1) throw ContractError("verify_range: workers must be >= 1");

  Natural span_z = hi - lo + 1;
  if (!span_z.fits_ulong_p()) throw ContractError("verify_range: range too large to schedule");
  const std::uint64_t span = span_z.get_ui();
  const std::uint64_t blocks = (span + kBlockSpan - 1) / kBlockSpan;

  const bool induction = lo == 1;
  const FactorPolicy policy{seed};

  std::vector<BlockPartial> partials(blocks);
  std::atomic<std::uint64_t> next_block{0};
  std::mutex failure_mutex;
  std::exception_ptr failure;

  const auto started = std::chrono::steady_clock::now();

  auto drain = [&] {
    try {
      for (;;) {
        const std::uint64_t block = next_block.fetch_add(1);
        if (block >= blocks) return;
        BlockPartial& partial = partials[block];
        const std::uint64_t begin = block * kBlockSpan;
        const std::uint64_t end = std::min(span, begin + kBlockSpan);
        Natural n = lo + begin;
        for (std::uint64_t offset = begin; offset < end; ++offset, ++n) {
          Limits local = limits;
          local.floor = induction ? n : lo;
          TrajectoryRecord record = run_trajectory(spec, n, local, false, policy);
          std::string key(classification_key(record.classification));
          if (induction && std::holds_alternative<DroppedBelowFloor>(record.classification)) {
            key = kConvergedByInduction;
          }
          partial.counts[key] += 1;
          if (is_anomalous(record.classification)) {
            partial.anomalies.push_back(Anomaly{n, std::move(record.classification)});
          }
          if (record.stopping_time &&
              (!partial.max_stopping || *record.stopping_time > partial.max_stopping->second)) {
            partial.max_stopping = std::pair{n, *record.stopping_time};
          }
        }
      }
    } catch (...) {
      std::scoped_lock lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  const std::uint32_t spawned =
      static_cast<std::uint32_t>(std::min<std::uint64_t>(workers, blocks));
  if (spawned <= 1) {
    drain();
  } else {
    std::vector<std::thread> crew;
    crew.reserve(spawned);
    for (std::uint32_t i = 0; i < spawned; ++i) crew.emplace_back(drain);
    for (auto& worker : crew) worker.join();
  }
  if (failure) std::rethrow_exception(failure);

  const auto finished = std::chrono::steady_clock::now();

  VerificationReport report;
  report.spec = spec;
  report.lo = lo;
  report.hi = hi;
  report.elapsed_seconds = std::chrono::duration<double>(finished - started).count();
  report.worker_count = workers;
  report.seed = seed;
  BlockPartial merged;
  for (const BlockPartial& partial : partials) absorb(merged, partial);
  report.counts = std::move(merged.counts);
  report.anomalies = std::move(merged.anomalies);
  report.max_stopping_time = std::move(merged.max_stopping);
  return report;
}

bool is_trivial_cycle(const CycleReport& report) {
  return !report.cycle.empty() && report.cycle.front() == 1;
}

std::vector<CycleReport> find_cycles(const ProblemSpec& spec, const Natural& element_bound,
                                     const Limits& limits, const FactorPolicy& policy) {
  validate(limits);
  if (element_bound < 1) throw ContractError("find_cycles: element_bound must be >= 1");

  Limits local = limits;
  local.floor = 1;

  std::map<Natural, std::vector<Natural>> orbits;  // minimal element -> cycle
  auto harvest = [&](Classification&& outcome) {
    if (auto* entered = std::get_if<EnteredCycle>(&outcome)) {
      Natural least = entered->cycle.front();
      orbits.emplace(std::move(least), std::move(entered->cycle));
    }
  };

  // The terminal cycle through 1 never shows up as EnteredCycle (reaching 1
  // ends a run), so walk it directly: 1 -> c+1 -> ... back to 1.
  {
    TrajectoryRecord walk = run_trajectory(spec, g_step(spec, 1, policy), local, true, policy);
    if (std::holds_alternative<ReachedOne>(walk.classification)) {
      std::vector<Natural> orbit;
      orbit.reserve(walk.iterates->size());
      orbit.emplace_back(1);
      orbit.insert(orbit.end(), walk.iterates->begin(), walk.iterates->end() - 1);
      orbits.emplace(1, std::move(orbit));
    } else {
      // 1 turned out to be pre-periodic (or the walk aborted); keep whatever
      // cycle the walk itself exposed.
      harvest(std::move(walk.classification));
    }
  }

  for (Natural n = 1; n <= element_bound; ++n) {
    harvest(classify(spec, n, local, policy));
  }

  const bool combined = is_holdout_rule(spec.rule);
  std::vector<CycleReport> reports;
  reports.reserve(orbits.size());
  for (auto& [least, orbit] : orbits) {
    CycleReport report;
    report.spec = spec;
    report.g_length = orbit.size();
    if (combined) {
      std::uint64_t smooth = 0;
      for (const Natural& element : orbit) {
        if (is_smooth(element, spec.rule, policy)) ++smooth;
      }
      report.t_length = smooth;
    }
    report.cycle = std::move(orbit);
    reports.push_back(std::move(report));
  }
  return reports;
}

std::string_view two_cycle_rejection_key(TwoCycleRejection r) {
  switch (r) {
    case TwoCycleRejection::NotSmooth: return "not_smooth";
    case TwoCycleRejection::CofactorRetained: return "cofactor_retained";
    case TwoCycleRejection::LoopFailed: return "loop_failed";
  }
  return "loop_failed";
}

TwoCycleScan two_cycle_analytic(const ProblemSpec& spec, const FactorPolicy& policy) {
  const auto* holdout = std::get_if<FiniteHoldout>(&spec.rule);
  if (holdout == nullptr) {
    throw ContractError("two_cycle_analytic: finite holdout rule required");
  }

  const Natural& c = spec.multiplier;
  TwoCycleScan scan;
  // A two-combined-step loop n -> t(n) -> n forces c^2*n + c + 1 = k*n for the
  // total removed cofactor k, so n | c + 1.
  for (const Natural& n : divisors(c + 1, policy)) {
    TwoCycleCandidate candidate;
    candidate.n = n;
    candidate.cofactor = c * c + (c + 1) / n;
    if (!is_smooth(n, spec.rule, policy)) {
      candidate.rejected = TwoCycleRejection::NotSmooth;
    } else {
      bool retained = false;
      for (const Natural& p : holdout->primes) {
        if (mpz_divisible_p(candidate.cofactor.get_mpz_t(), p.get_mpz_t())) {
          retained = true;
          break;
        }
      }
      if (retained) {
        // Retained primes never get divided out, so they cannot appear in a
        // removed cofactor.
        candidate.rejected = TwoCycleRejection::CofactorRetained;
      } else {
        const Natural forward = t_step(spec, n, policy);
        if (forward == n || t_step(spec, forward, policy) != n) {
          candidate.rejected = TwoCycleRejection::LoopFailed;
        }
      }
    }
    if (!candidate.rejected) scan.solutions.emplace_back(candidate.n, candidate.cofactor);
    scan.candidates.push_back(std::move(candidate));
  }
  return scan;
}

bool survey_row_clean(const SurveyRow& row) {
  if (row.error) return false;
  if (row.report && !row.report->anomalies.empty()) return false;
  for (const CycleReport& cycle : row.cycles) {
    if (!is_trivial_cycle(cycle)) return false;
  }
  return true;
}

SurveyReport survey(const SurveyConfig& config) {
  validate(config.limits);
  if (config.pool.empty()) throw ContractError("survey: prime pool must be non-empty");
  if (config.max_set_size < 2) throw ContractError("survey: max_set_size must be >= 2");
  if (config.verify_hi < 1) throw ContractError("survey: verify_hi must be >= 1");
  if (config.workers < 1) throw ContractError("survey: workers must be >= 1");

  std::vector<Natural> pool = config.pool;
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (const Natural& p : pool) {
    if (!is_prime(p)) throw ContractError("survey: pool entry " + to_decimal(p) + " is not prime");
  }

  std::vector<Natural> multipliers;
  for (const Natural& c : config.multipliers) {
    if (c < 2) throw ContractError("survey: multiplier " + to_decimal(c) + " is below 2");
    if (std::find(multipliers.begin(), multipliers.end(), c) == multipliers.end()) {
      multipliers.push_back(c);
    }
  }
  if (multipliers.empty()) throw ContractError("survey: multipliers must be non-empty");

  SurveyReport out;
  out.config = config;

  const std::size_t cap = std::min(config.max_set_size, pool.size());
  for (const Natural& c : multipliers) {
    for (std::size_t size = 1; size <= cap; ++size) {
      // Lexicographic combinations of `size` indices into the sorted pool.
      std::vector<std::size_t> pick(size);
      for (std::size_t i = 0; i < size; ++i) pick[i] = i;
      for (;;) {
        std::vector<Natural> subset;
        subset.reserve(size);
        for (std::size_t index : pick) subset.push_back(pool[index]);

        SurveyRow row;
        row.spec = make_problem(c, make_finite_holdout(std::move(subset)));
        if (auto reason = is_trivial(row.spec)) {
          row.skipped = reason;
        } else {
          try {
            row.report = verify_range(row.spec, 1, config.verify_hi, config.limits,
                                      config.workers, config.seed);
            row.cycles =
                find_cycles(row.spec, config.verify_hi, config.limits, FactorPolicy{config.seed});
          } catch (const std::exception& failure) {
            row.error = failure.what();
          }
        }
        out.rows.push_back(std::move(row));

        // Advance the combination; stop once the leading index runs out.
        std::size_t slot = size;
        while (slot > 0 && pick[slot - 1] == pool.size() - size + slot - 1) --slot;
        if (slot == 0) break;
        ++pick[slot - 1];
        for (std::size_t i = slot; i < size; ++i) pick[i] = pick[i - 1] + 1;
      }
    }
  }
  return out;
}

}  // namespace holdout
