#include "holdout/report_json.hpp"

#include <sstream>
#include <variant>

#include "holdout/errors.hpp"

namespace nlohmann {

void adl_serializer<mpz_class>::to_json(json& j, const mpz_class& n) {
  j = holdout::to_decimal(n);
}

void adl_serializer<mpz_class>::from_json(const json& j, mpz_class& n) {
  n = holdout::parse_natural(j.get<std::string>());
}

}  // namespace nlohmann

namespace holdout {
namespace {

template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

json stopping_pair_json(const std::optional<std::pair<Natural, std::uint64_t>>& value) {
  if (!value) return nullptr;
  return json{{"n", value->first}, {"value", value->second}};
}

std::optional<std::pair<Natural, std::uint64_t>> stopping_pair_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return std::pair<Natural, std::uint64_t>{j.at("n").get<Natural>(),
                                           j.at("value").get<std::uint64_t>()};
}

TwoCycleRejection rejection_from_key(const std::string& key) {
  if (key == "not_smooth") return TwoCycleRejection::NotSmooth;
  if (key == "cofactor_retained") return TwoCycleRejection::CofactorRetained;
  if (key == "loop_failed") return TwoCycleRejection::LoopFailed;
  throw ParseError("unknown rejection key: " + key);
}

Triviality triviality_from_key(const std::string& key) {
  if (key == "singleton") return Triviality::Singleton;
  if (key == "multiplier_retained") return Triviality::MultiplierRetained;
  throw ParseError("unknown triviality key: " + key);
}

// Quote a CSV field only when it needs it.
std::string csv_field(const std::string& raw) {
  if (raw.find_first_of(",\"\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char ch : raw) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

}  // namespace

void to_json(json& j, const ProblemSpec& spec) {
  j = json{{"name", spec.name}, {"problem", problem_text(spec)}};
}

void from_json(const json& j, ProblemSpec& spec) {
  spec = parse_problem(j.at("problem").get<std::string>());
  spec.name = j.at("name").get<std::string>();
}

void to_json(json& j, const Limits& limits) {
  j = json{{"max_g_steps", limits.max_g_steps},
           {"max_value_bits", limits.max_value_bits},
           {"floor", limits.floor}};
}

void from_json(const json& j, Limits& limits) {
  j.at("max_g_steps").get_to(limits.max_g_steps);
  j.at("max_value_bits").get_to(limits.max_value_bits);
  j.at("floor").get_to(limits.floor);
}

void to_json(json& j, const Classification& c) {
  std::visit(overloaded{
                 [&](const ReachedOne& v) {
                   j = json{{"kind", "reached_one"}, {"g_steps", v.g_steps}};
                 },
                 [&](const EnteredCycle& v) {
                   j = json{{"kind", "entered_cycle"},
                            {"cycle", v.cycle},
                            {"entry_step", v.entry_step}};
                 },
                 [&](const DroppedBelowFloor& v) {
                   j = json{{"kind", "dropped_below_floor"},
                            {"value", v.value},
                            {"g_steps", v.g_steps}};
                 },
                 [&](const AbortedSteps&) { j = json{{"kind", "aborted_steps"}}; },
                 [&](const AbortedSize&) { j = json{{"kind", "aborted_size"}}; },
                 [&](const AbortedFactor& v) {
                   j = json{{"kind", "aborted_factor"}, {"reason", v.reason}};
                 },
             },
             c);
}

void from_json(const json& j, Classification& c) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "reached_one") {
    c = ReachedOne{j.at("g_steps").get<std::uint64_t>()};
  } else if (kind == "entered_cycle") {
    c = EnteredCycle{j.at("cycle").get<std::vector<Natural>>(),
                     j.at("entry_step").get<std::uint64_t>()};
  } else if (kind == "dropped_below_floor") {
    c = DroppedBelowFloor{j.at("value").get<Natural>(), j.at("g_steps").get<std::uint64_t>()};
  } else if (kind == "aborted_steps") {
    c = AbortedSteps{};
  } else if (kind == "aborted_size") {
    c = AbortedSize{};
  } else if (kind == "aborted_factor") {
    c = AbortedFactor{j.at("reason").get<std::string>()};
  } else {
    throw ParseError("unknown classification kind: " + kind);
  }
}

void to_json(json& j, const TrajectoryRecord& record) {
  j = json{{"start", record.start},
           {"classification", record.classification},
           {"steps", record.g_steps_taken},
           {"max_value", record.max_value},
           {"stopping_time", record.stopping_time}};
  if (record.iterates) j["iterates"] = *record.iterates;
}

void from_json(const json& j, TrajectoryRecord& record) {
  j.at("start").get_to(record.start);
  j.at("classification").get_to(record.classification);
  j.at("steps").get_to(record.g_steps_taken);
  j.at("max_value").get_to(record.max_value);
  j.at("stopping_time").get_to(record.stopping_time);
  record.iterates.reset();
  if (j.contains("iterates")) record.iterates = j.at("iterates").get<std::vector<Natural>>();
}

void to_json(json& j, const Anomaly& anomaly) {
  j = json{{"n", anomaly.n}, {"classification", anomaly.classification}};
}

void from_json(const json& j, Anomaly& anomaly) {
  j.at("n").get_to(anomaly.n);
  j.at("classification").get_to(anomaly.classification);
}

void to_json(json& j, const VerificationReport& report) {
  j = json{{"spec", report.spec},
           {"range", json{{"lo", report.lo}, {"hi", report.hi}}},
           {"counts", report.counts},
           {"anomalies", report.anomalies},
           {"max_stopping_time", stopping_pair_json(report.max_stopping_time)},
           {"elapsed_seconds", report.elapsed_seconds},
           {"worker_count", report.worker_count},
           {"seed", report.seed}};
}

void from_json(const json& j, VerificationReport& report) {
  j.at("spec").get_to(report.spec);
  j.at("range").at("lo").get_to(report.lo);
  j.at("range").at("hi").get_to(report.hi);
  j.at("counts").get_to(report.counts);
  j.at("anomalies").get_to(report.anomalies);
  report.max_stopping_time = stopping_pair_from(j.at("max_stopping_time"));
  j.at("elapsed_seconds").get_to(report.elapsed_seconds);
  j.at("worker_count").get_to(report.worker_count);
  j.at("seed").get_to(report.seed);
}

void to_json(json& j, const CycleReport& report) {
  j = json{{"spec", report.spec},
           {"cycle", report.cycle},
           {"g_length", report.g_length},
           {"t_length", report.t_length}};
}

void from_json(const json& j, CycleReport& report) {
  j.at("spec").get_to(report.spec);
  j.at("cycle").get_to(report.cycle);
  j.at("g_length").get_to(report.g_length);
  j.at("t_length").get_to(report.t_length);
}

void to_json(json& j, const TwoCycleCandidate& candidate) {
  j = json{{"n", candidate.n}, {"cofactor", candidate.cofactor}};
  if (candidate.rejected) {
    j["rejected"] = std::string(two_cycle_rejection_key(*candidate.rejected));
  } else {
    j["rejected"] = nullptr;
  }
}

void from_json(const json& j, TwoCycleCandidate& candidate) {
  j.at("n").get_to(candidate.n);
  j.at("cofactor").get_to(candidate.cofactor);
  const json& rejected = j.at("rejected");
  if (rejected.is_null()) {
    candidate.rejected = std::nullopt;
  } else {
    candidate.rejected = rejection_from_key(rejected.get<std::string>());
  }
}

void to_json(json& j, const TwoCycleScan& scan) {
  json solutions = json::array();
  for (const auto& [n, cofactor] : scan.solutions) {
    solutions.push_back(json{{"n", n}, {"cofactor", cofactor}});
  }
  j = json{{"solutions", std::move(solutions)}, {"candidates", scan.candidates}};
}

void from_json(const json& j, TwoCycleScan& scan) {
  scan.solutions.clear();
  for (const json& entry : j.at("solutions")) {
    scan.solutions.emplace_back(entry.at("n").get<Natural>(),
                                entry.at("cofactor").get<Natural>());
  }
  j.at("candidates").get_to(scan.candidates);
}

void to_json(json& j, const PropertyResult& result) {
  j = json{{"lemma_id", result.lemma_id},
           {"tested_instances", result.tested_instances},
           {"failures", result.failures},
           {"passed", result.passed},
           {"notes", result.notes}};
}

void from_json(const json& j, PropertyResult& result) {
  j.at("lemma_id").get_to(result.lemma_id);
  j.at("tested_instances").get_to(result.tested_instances);
  j.at("failures").get_to(result.failures);
  j.at("passed").get_to(result.passed);
  j.at("notes").get_to(result.notes);
}

void to_json(json& j, const SurveyConfig& config) {
  j = json{{"multipliers", config.multipliers},
           {"pool", config.pool},
           {"max_set_size", config.max_set_size},
           {"verify_hi", config.verify_hi},
           {"limits", config.limits},
           {"workers", config.workers},
           {"seed", config.seed}};
}

void from_json(const json& j, SurveyConfig& config) {
  j.at("multipliers").get_to(config.multipliers);
  j.at("pool").get_to(config.pool);
  j.at("max_set_size").get_to(config.max_set_size);
  j.at("verify_hi").get_to(config.verify_hi);
  j.at("limits").get_to(config.limits);
  j.at("workers").get_to(config.workers);
  j.at("seed").get_to(config.seed);
}

void to_json(json& j, const SurveyRow& row) {
  j = json{{"spec", row.spec},
           {"skipped", row.skipped ? json(std::string(triviality_key(*row.skipped))) : json()},
           {"report", row.report},
           {"cycles", row.cycles},
           {"error", row.error}};
}

void from_json(const json& j, SurveyRow& row) {
  j.at("spec").get_to(row.spec);
  const json& skipped = j.at("skipped");
  if (skipped.is_null()) {
    row.skipped = std::nullopt;
  } else {
    row.skipped = triviality_from_key(skipped.get<std::string>());
  }
  j.at("report").get_to(row.report);
  j.at("cycles").get_to(row.cycles);
  j.at("error").get_to(row.error);
}

void to_json(json& j, const SurveyReport& report) {
  j = json{{"config", report.config}, {"rows", report.rows}};
}

void from_json(const json& j, SurveyReport& report) {
  j.at("config").get_to(report.config);
  j.at("rows").get_to(report.rows);
}

std::string survey_csv(const SurveyReport& report) {
  std::ostringstream out;
  out << "name,range,converged,cycles,aborts,status\n";
  const std::string range = "1.." + to_decimal(report.config.verify_hi);
  for (const SurveyRow& row : report.rows) {
    std::uint64_t converged = 0;
    std::uint64_t aborts = 0;
    if (row.report) {
      converged = row.report->converged_count();
      for (const auto& [key, count] : row.report->counts) {
        if (key.rfind("aborted_", 0) == 0) aborts += count;
      }
    }
    std::string status = "ok";
    if (row.skipped) {
      status = "skipped:" + std::string(triviality_key(*row.skipped));
    } else if (row.error) {
      status = "error:" + *row.error;
    } else if (row.report && !row.report->anomalies.empty()) {
      status = "anomalies";
    } else {
      for (const CycleReport& cycle : row.cycles) {
        if (!is_trivial_cycle(cycle)) status = "nontrivial_cycle";
      }
    }
    out << csv_field(row.spec.name) << ',' << range << ',' << converged << ','
        << row.cycles.size() << ',' << aborts << ',' << csv_field(status) << '\n';
  }
  return out.str();
}

json stable_report_json(const VerificationReport& report) {
  json j = report;
  j.erase("elapsed_seconds");
  j.erase("worker_count");
  return j;
}

}  // namespace holdout
