// holdout: trajectory runner, range verifier, cycle finder, survey scanner,
// and lemma battery for prime holdout / divisor iteration problems.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "holdout/errors.hpp"
#include "holdout/paperprops.hpp"
#include "holdout/report_json.hpp"
#include "holdout/trajectory.hpp"
#include "holdout/verify.hpp"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitAnomaly = 1;
constexpr int kExitResource = 2;
constexpr int kExitUsage = 64;

constexpr const char* kGrammarHint =
    "problem grammar: H:<c>:<p,...> | HR:<c>:<m>:<r,...> | D:<c>:<p,...>";

struct GlobalOptions {
  std::string output = "plain";
  std::string out_path;
  std::uint64_t max_steps = holdout::Limits{}.max_g_steps;
  std::uint32_t max_bits = holdout::Limits{}.max_value_bits;
  std::uint64_t seed = 0;
  std::uint32_t workers = 1;
};

holdout::Limits limits_of(const GlobalOptions& opts) {
  holdout::Limits limits;
  limits.max_g_steps = opts.max_steps;
  limits.max_value_bits = opts.max_bits;
  return limits;
}

// Writes to --out when given, stdout otherwise.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw holdout::ContractError("cannot open output file: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<holdout::Natural> parse_natural_list(const std::string& text) {
  std::vector<holdout::Natural> out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    const std::size_t end = std::min(text.find(',', begin), text.size());
    out.push_back(holdout::parse_natural(text.substr(begin, end - begin)));
    begin = end + 1;
  }
  return out;
}

// Accepts "5..8" (inclusive range) or "5,7,11".
std::vector<holdout::Natural> parse_multipliers(const std::string& text) {
  const std::size_t dots = text.find("..");
  if (dots == std::string::npos) return parse_natural_list(text);
  const holdout::Natural lo = holdout::parse_natural(text.substr(0, dots));
  const holdout::Natural hi = holdout::parse_natural(text.substr(dots + 2));
  if (hi < lo) throw holdout::ParseError("multiplier range is descending: " + text);
  std::vector<holdout::Natural> out;
  for (holdout::Natural c = lo; c <= hi; ++c) out.push_back(c);
  return out;
}

void require_output(const GlobalOptions& opts, bool csv_ok) {
  if (opts.output == "plain" || opts.output == "json") return;
  if (opts.output == "csv" && csv_ok) return;
  throw holdout::ContractError("unsupported --output for this command: " + opts.output);
}

int cmd_trajectory(const GlobalOptions& opts, const std::string& problem_text,
                   const std::string& start_text, bool record) {
  require_output(opts, false);
  const holdout::ProblemSpec spec = holdout::parse_problem(problem_text);
  const holdout::Natural start = holdout::parse_natural(start_text);
  const holdout::TrajectoryRecord rec = holdout::run_trajectory(
      spec, start, limits_of(opts), record, holdout::FactorPolicy{opts.seed});

  Sink sink(opts.out_path);
  if (opts.output == "json") {
    sink.stream() << holdout::json(rec).dump(2) << '\n';
  } else if (record) {
    // The bare iterate list, one line — the golden-file form.
    std::string line;
    for (const holdout::Natural& value : *rec.iterates) {
      if (!line.empty()) line += ' ';
      line += holdout::to_decimal(value);
    }
    sink.stream() << line << '\n';
  } else {
    sink.stream() << holdout::to_decimal(rec.start) << ": "
                  << holdout::classification_key(rec.classification) << " after "
                  << rec.g_steps_taken << " g-steps, max " << holdout::to_decimal(rec.max_value);
    if (rec.stopping_time) sink.stream() << ", stopping time " << *rec.stopping_time;
    sink.stream() << '\n';
  }

  if (std::holds_alternative<holdout::EnteredCycle>(rec.classification)) return kExitAnomaly;
  if (holdout::is_anomalous(rec.classification)) return kExitResource;
  return kExitClean;
}

int cmd_verify(const GlobalOptions& opts, const std::string& problem_text,
               const std::string& lo_text, const std::string& hi_text) {
  require_output(opts, false);
  const holdout::ProblemSpec spec = holdout::parse_problem(problem_text);
  const holdout::Natural lo = holdout::parse_natural(lo_text);
  const holdout::Natural hi = holdout::parse_natural(hi_text);
  const holdout::VerificationReport report =
      holdout::verify_range(spec, lo, hi, limits_of(opts), opts.workers, opts.seed);

  Sink sink(opts.out_path);
  if (opts.output == "json") {
    sink.stream() << holdout::json(report).dump(2) << '\n';
  } else {
    auto& out = sink.stream();
    out << "problem: " << report.spec.name << '\n';
    out << "range: " << holdout::to_decimal(report.lo) << ".." << holdout::to_decimal(report.hi)
        << '\n';
    for (const auto& [key, count] : report.counts) out << key << ": " << count << '\n';
    out << "anomalies: " << report.anomalies.size() << '\n';
    for (const holdout::Anomaly& anomaly : report.anomalies) {
      out << "  " << holdout::to_decimal(anomaly.n) << ": "
          << holdout::classification_key(anomaly.classification) << '\n';
    }
    if (report.max_stopping_time) {
      out << "max_stopping_time: " << report.max_stopping_time->second << " at n="
          << holdout::to_decimal(report.max_stopping_time->first) << '\n';
    }
    out << "elapsed_seconds: " << report.elapsed_seconds << '\n';
    out << "workers: " << report.worker_count << ", seed: " << report.seed << '\n';
  }
  return report.anomalies.empty() ? kExitClean : kExitAnomaly;
}

int cmd_cycles(const GlobalOptions& opts, const std::string& problem_text,
               const std::string& bound_text) {
  require_output(opts, false);
  const holdout::ProblemSpec spec = holdout::parse_problem(problem_text);
  const holdout::Natural bound = holdout::parse_natural(bound_text);
  const holdout::FactorPolicy policy{opts.seed};

  const std::vector<holdout::CycleReport> cycles =
      holdout::find_cycles(spec, bound, limits_of(opts), policy);

  std::optional<holdout::TwoCycleScan> scan;
  bool contained = true;
  if (std::holds_alternative<holdout::FiniteHoldout>(spec.rule)) {
    scan = holdout::two_cycle_analytic(spec, policy);
    // Every analytic loop must show up among the enumerated orbits once the
    // bound covers its elements.
    for (const auto& [n, cofactor] : scan->solutions) {
      const holdout::Natural partner = holdout::t_step(spec, n, policy);
      if (n > bound || partner > bound) continue;
      const bool found = std::any_of(
          cycles.begin(), cycles.end(), [&](const holdout::CycleReport& report) {
            const auto& orbit = report.cycle;
            return std::find(orbit.begin(), orbit.end(), n) != orbit.end() &&
                   std::find(orbit.begin(), orbit.end(), partner) != orbit.end();
          });
      if (!found) contained = false;
    }
  }

  Sink sink(opts.out_path);
  if (opts.output == "json") {
    holdout::json j{{"cycles", cycles},
                    {"analytic", scan},
                    {"containment_ok", contained}};
    sink.stream() << j.dump(2) << '\n';
  } else {
    auto& out = sink.stream();
    for (const holdout::CycleReport& report : cycles) {
      std::string orbit;
      for (const holdout::Natural& value : report.cycle) {
        if (!orbit.empty()) orbit += ", ";
        orbit += holdout::to_decimal(value);
      }
      out << '(' << orbit << ") g_length=" << report.g_length;
      if (report.t_length) out << " t_length=" << *report.t_length;
      out << '\n';
    }
    if (scan) {
      for (const holdout::TwoCycleCandidate& candidate : scan->candidates) {
        out << "analytic n=" << holdout::to_decimal(candidate.n)
            << " cofactor=" << holdout::to_decimal(candidate.cofactor) << ": "
            << (candidate.rejected
                    ? std::string("rejected (") +
                          std::string(holdout::two_cycle_rejection_key(*candidate.rejected)) + ")"
                    : "solution")
            << '\n';
      }
      if (!contained) out << "containment check FAILED\n";
    }
  }

  const bool only_trivial =
      cycles.size() == 1 && holdout::is_trivial_cycle(cycles.front()) && contained;
  return only_trivial ? kExitClean : kExitAnomaly;
}

int cmd_survey(const GlobalOptions& opts, const std::string& multipliers_text,
               const std::string& pool_text, std::size_t max_set_size,
               const std::string& hi_text) {
  require_output(opts, true);
  holdout::SurveyConfig config;
  config.multipliers = parse_multipliers(multipliers_text);
  config.pool = parse_natural_list(pool_text);
  config.max_set_size = max_set_size;
  config.verify_hi = holdout::parse_natural(hi_text);
  config.limits = limits_of(opts);
  config.workers = opts.workers;
  config.seed = opts.seed;

  const holdout::SurveyReport report = holdout::survey(config);

  Sink sink(opts.out_path);
  if (opts.output == "json") {
    sink.stream() << holdout::json(report).dump(2) << '\n';
  } else {
    // CSV doubles as the plain form; it is already one row per problem.
    sink.stream() << holdout::survey_csv(report);
  }

  const bool all_clean = std::all_of(report.rows.begin(), report.rows.end(),
                                     [](const holdout::SurveyRow& row) {
                                       return holdout::survey_row_clean(row);
                                     });
  return all_clean ? kExitClean : kExitAnomaly;
}

int cmd_props(const GlobalOptions& opts, const std::string& scale_text) {
  require_output(opts, false);
  holdout::Scale scale;
  if (scale_text == "small") {
    scale = holdout::Scale::Small;
  } else if (scale_text == "standard") {
    scale = holdout::Scale::Standard;
  } else {
    throw holdout::ContractError("--scale must be small or standard, got: " + scale_text);
  }

  const std::vector<holdout::PropertyResult> results = holdout::run_all(scale);

  Sink sink(opts.out_path);
  if (opts.output == "json") {
    sink.stream() << holdout::json(results).dump(2) << '\n';
  } else {
    auto& out = sink.stream();
    for (const holdout::PropertyResult& result : results) {
      out << "lemma " << result.lemma_id << ": " << (result.passed ? "PASS" : "FAIL") << " ("
          << result.tested_instances << " instances";
      if (!result.notes.empty()) out << "; " << result.notes;
      out << ")\n";
      for (const holdout::Natural& witness : result.failures) {
        out << "  failing witness: " << holdout::to_decimal(witness) << '\n';
      }
    }
  }

  const bool all_passed = std::all_of(
      results.begin(), results.end(),
      [](const holdout::PropertyResult& result) { return result.passed; });
  return all_passed ? kExitClean : kExitAnomaly;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"prime holdout / divisor problem verification engine"};
  app.require_subcommand(1);

  GlobalOptions opts;
  app.add_option("--output", opts.output, "output format: json, csv, plain")
      ->check(CLI::IsMember({"json", "csv", "plain"}));
  app.add_option("--out", opts.out_path, "write the report to a file instead of stdout");
  app.add_option("--max-steps", opts.max_steps, "g-step budget per trajectory");
  app.add_option("--max-bits", opts.max_bits, "iterate size cap in bits");
  app.add_option("--seed", opts.seed, "factorization seed");
  app.add_option("--workers", opts.workers, "worker thread count for verify/survey");

  std::string problem_text;
  std::string start_text;
  bool record = false;
  CLI::App* traj = app.add_subcommand("trajectory", "run one trajectory to classification");
  traj->add_option("problem", problem_text, kGrammarHint)->required();
  traj->add_option("n", start_text, "starting value")->required();
  traj->add_flag("--record", record, "keep and print the full iterate list");

  std::string lo_text;
  std::string hi_text;
  CLI::App* verify = app.add_subcommand("verify", "classify every n in a range");
  verify->add_option("problem", problem_text, kGrammarHint)->required();
  verify->add_option("lo", lo_text, "range start (>= 1)")->required();
  verify->add_option("hi", hi_text, "range end (inclusive)")->required();

  std::string bound_text;
  CLI::App* cycles = app.add_subcommand("cycles", "enumerate cycles and run the 2-loop solver");
  cycles->add_option("problem", problem_text, kGrammarHint)->required();
  cycles->add_option("bound", bound_text, "search every start up to this bound")->required();

  std::string multipliers_text;
  std::string pool_text;
  std::size_t max_set_size = 2;
  std::string survey_hi = "10000";
  CLI::App* survey = app.add_subcommand("survey", "scan multiplier/holdout-set combinations");
  survey->add_option("--multipliers", multipliers_text, "range like 5..8 or list like 5,7")
      ->required();
  survey->add_option("--pool", pool_text, "candidate holdout primes, comma separated")
      ->required();
  survey->add_option("--max-set-size", max_set_size, "largest holdout subset to form");
  survey->add_option("--hi", survey_hi, "verification range end per problem");

  std::string scale_text = "standard";
  CLI::App* props = app.add_subcommand("props", "run the lemma instance battery");
  props->add_option("--scale", scale_text, "small or standard");

  // Let --output/--seed/... appear after the subcommand name too.
  for (CLI::App* sub : {traj, verify, cycles, survey, props}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitUsage;
  }

  try {
    if (*traj) return cmd_trajectory(opts, problem_text, start_text, record);
    if (*verify) return cmd_verify(opts, problem_text, lo_text, hi_text);
    if (*cycles) return cmd_cycles(opts, problem_text, bound_text);
    if (*survey) return cmd_survey(opts, multipliers_text, pool_text, max_set_size, survey_hi);
    if (*props) return cmd_props(opts, scale_text);
    std::cerr << "no command selected\n";
    return kExitUsage;
  } catch (const holdout::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n' << kGrammarHint << '\n';
    return kExitUsage;
  } catch (const holdout::ContractError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const holdout::BudgetError& e) {
    std::cerr << "factoring budget exhausted: " << e.what() << '\n';
    return kExitResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  }
}
