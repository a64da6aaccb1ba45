#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include <doctest.h>

#include "holdout/errors.hpp"
#include "holdout/report_json.hpp"
#include "holdout/verify.hpp"

using namespace holdout;

namespace {

ProblemSpec h5() { return parse_problem("H:5:2,3"); }
ProblemSpec hr2() { return parse_problem("HR:2:4:1"); }
ProblemSpec d52() { return parse_problem("D:5:2"); }

const std::vector<Natural> kEliteOrbit{13, 66, 33, 166, 83, 416};

}  // namespace

TEST_CASE("range verification of the fifth holdout problem to ten thousand") {
  const VerificationReport report = verify_range(h5(), 1, 10'000, Limits{});
  CHECK(report.anomalies.empty());
  CHECK(report.counts ==
        std::map<std::string, std::uint64_t>{{"converged_by_induction", 6615},
                                             {"reached_one", 3385}});
  CHECK(report.total_count() == 10'000);
  CHECK(report.converged_count() == 10'000);
  REQUIRE(report.max_stopping_time.has_value());
  CHECK(report.max_stopping_time->first == 3);
  CHECK(report.max_stopping_time->second == 4);
  CHECK(report.lo == 1);
  CHECK(report.hi == 10'000);
}

TEST_CASE("the induction upgrade is truthful where convergence holds") {
  // Every drop below the start counted as converged must genuinely reach 1
  // when re-run without the per-start floor.
  const ProblemSpec spec = h5();
  for (std::uint64_t n = 1; n <= 2'000; ++n) {
    CAPTURE(n);
    const Classification full = classify(spec, n, Limits{});
    CHECK(std::holds_alternative<ReachedOne>(full));
  }
}

TEST_CASE("ranges away from 1 keep drops as drops") {
  const VerificationReport single = verify_range(h5(), 28, 28, Limits{});
  CHECK(single.counts == std::map<std::string, std::uint64_t>{{"dropped_below_floor", 1}});
  CHECK(single.anomalies.empty());
  CHECK(single.converged_count() == 0);
  REQUIRE(single.max_stopping_time.has_value());
  CHECK(single.max_stopping_time->first == 28);
  CHECK(single.max_stopping_time->second == 1);

  const VerificationReport window = verify_range(h5(), 10, 30, Limits{});
  CHECK(window.counts == std::map<std::string, std::uint64_t>{{"dropped_below_floor", 11},
                                                              {"reached_one", 10}});
  REQUIRE(window.max_stopping_time.has_value());
  CHECK(window.max_stopping_time->first == 16);
  CHECK(window.max_stopping_time->second == 3);
}

TEST_CASE("a divisor problem surfaces its cycles and runaways") {
  const VerificationReport report = verify_range(d52(), 1, 100, Limits{});
  CHECK(report.counts ==
        std::map<std::string, std::uint64_t>{{"aborted_steps", 25},
                                             {"converged_by_induction", 63},
                                             {"entered_cycle", 3},
                                             {"reached_one", 9}});
  REQUIRE(report.anomalies.size() == 28);

  // Ascending by n, every one anomalous.
  for (std::size_t i = 0; i < report.anomalies.size(); ++i) {
    CHECK(is_anomalous(report.anomalies[i].classification));
    if (i > 0) CHECK(report.anomalies[i - 1].n < report.anomalies[i].n);
  }

  // 5 rides into the 13-cycle without ever dipping below itself.
  CHECK(report.anomalies.front().n == 5);
  CHECK(report.anomalies.front().classification ==
        Classification{EnteredCycle{kEliteOrbit, 2}});

  std::vector<Natural> cycle_starts;
  for (const Anomaly& a : report.anomalies) {
    if (std::holds_alternative<EnteredCycle>(a.classification)) cycle_starts.push_back(a.n);
  }
  CHECK(cycle_starts == std::vector<Natural>{5, 13, 17});

  REQUIRE(report.max_stopping_time.has_value());
  CHECK(report.max_stopping_time->first == 57);
  CHECK(report.max_stopping_time->second == 6);
}

TEST_CASE("verify_range argument validation") {
  CHECK_THROWS_AS(verify_range(h5(), 0, 10, Limits{}), ContractError);
  CHECK_THROWS_AS(verify_range(h5(), 30, 10, Limits{}), ContractError);
  CHECK_THROWS_AS(verify_range(h5(), 1, 10, Limits{}, 0), ContractError);
}

TEST_CASE("worker count never changes the report") {
  const VerificationReport serial = verify_range(hr2(), 1, 3'000, Limits{}, 1, 7);
  const VerificationReport four = verify_range(hr2(), 1, 3'000, Limits{}, 4, 7);
  const VerificationReport sixteen = verify_range(hr2(), 1, 3'000, Limits{}, 16, 7);

  CHECK(serial.worker_count == 1);
  CHECK(four.worker_count == 4);
  CHECK(sixteen.worker_count == 16);

  const std::string a = stable_report_json(serial).dump();
  const std::string b = stable_report_json(four).dump();
  const std::string c = stable_report_json(sixteen).dump();
  CHECK(a == b);
  CHECK(b == c);

  // The scrub drops exactly the run-dependent fields.
  const nlohmann::json stable = stable_report_json(serial);
  CHECK_FALSE(stable.contains("elapsed_seconds"));
  CHECK_FALSE(stable.contains("worker_count"));
  CHECK(stable.contains("counts"));
  CHECK(stable["seed"] == 7);
}

TEST_CASE("cycle enumeration pins the known orbits") {
  const Limits limits{};

  const std::vector<CycleReport> five = find_cycles(h5(), 10'000, limits);
  REQUIRE(five.size() == 1);
  CHECK(five[0].cycle == std::vector<Natural>{1, 6, 31});
  CHECK(five[0].g_length == 3);
  CHECK(five[0].t_length == 2);
  CHECK(five[0].spec == h5());
  CHECK(is_trivial_cycle(five[0]));

  // The trivial orbit is found even with the smallest possible bound.
  CHECK(find_cycles(h5(), 1, limits) == five);

  const std::vector<CycleReport> two_only = find_cycles(parse_problem("H:5:2"), 100, limits);
  REQUIRE(two_only.size() == 1);
  CHECK(two_only[0].cycle == std::vector<Natural>{1, 6, 2, 11});
  CHECK(two_only[0].g_length == 4);
  CHECK(two_only[0].t_length == 2);
  CHECK(is_trivial_cycle(two_only[0]));

  const std::vector<CycleReport> residue = find_cycles(hr2(), 1'000, limits);
  REQUIRE(residue.size() == 1);
  CHECK(residue[0].cycle == std::vector<Natural>{1, 3});
  CHECK(residue[0].g_length == 2);
  CHECK(residue[0].t_length == 1);
}

TEST_CASE("the walk from 1 can land in a cycle that skips 1") {
  // For H_{7,{2,3}} the start 1 is pre-periodic: 1, 8, 57, 3, 22, 2, 15, 3.
  const ProblemSpec seven = parse_problem("H:7:2,3");
  const std::vector<CycleReport> found = find_cycles(seven, 1, Limits{});
  REQUIRE(found.size() == 1);
  CHECK(found[0].cycle == std::vector<Natural>{2, 15, 3, 22});
  CHECK(found[0].g_length == 4);
  CHECK(found[0].t_length == 2);
  CHECK_FALSE(is_trivial_cycle(found[0]));
  CHECK(find_cycles(seven, 100, Limits{}) == found);
}

TEST_CASE("divisor cycles carry no combined-step length") {
  const std::vector<CycleReport> cycles = find_cycles(d52(), 100, Limits{});
  REQUIRE(cycles.size() == 3);
  CHECK(cycles[0].cycle == std::vector<Natural>{1, 6, 3, 16});
  CHECK(cycles[1].cycle == kEliteOrbit);
  CHECK(cycles[2].cycle == std::vector<Natural>{17, 86, 43, 216, 27, 136});
  for (const CycleReport& report : cycles) {
    CHECK(report.g_length == report.cycle.size());
    CHECK_FALSE(report.t_length.has_value());
  }
  CHECK(is_trivial_cycle(cycles[0]));
  CHECK_FALSE(is_trivial_cycle(cycles[1]));
}

TEST_CASE("reported cycles actually close under the map") {
  for (const char* text : {"H:5:2,3", "H:5:2", "H:7:2,3", "HR:2:4:1", "D:5:2"}) {
    const ProblemSpec spec = parse_problem(text);
    for (const CycleReport& report : find_cycles(spec, 100, Limits{})) {
      CAPTURE(text);
      REQUIRE_FALSE(report.cycle.empty());
      CHECK(report.cycle.front() == *std::min_element(report.cycle.begin(), report.cycle.end()));
      for (std::size_t i = 0; i < report.cycle.size(); ++i) {
        const Natural& here = report.cycle[i];
        const Natural& there = report.cycle[(i + 1) % report.cycle.size()];
        CHECK(g_step(spec, here) == there);
      }
    }
  }
}

TEST_CASE("find_cycles validates its bound") {
  CHECK_THROWS_AS(find_cycles(h5(), 0, Limits{}), ContractError);
}

TEST_CASE("two-combined-step scan for the fifth problem") {
  const TwoCycleScan scan = two_cycle_analytic(h5());
  CHECK(scan.solutions == std::vector<std::pair<Natural, Natural>>{{1, 31}});
  REQUIRE(scan.candidates.size() == 4);
  CHECK(scan.candidates[0] == TwoCycleCandidate{1, 31, std::nullopt});
  CHECK(scan.candidates[1] == TwoCycleCandidate{2, 28, TwoCycleRejection::CofactorRetained});
  CHECK(scan.candidates[2] == TwoCycleCandidate{3, 27, TwoCycleRejection::CofactorRetained});
  CHECK(scan.candidates[3] == TwoCycleCandidate{6, 26, TwoCycleRejection::CofactorRetained});
}

TEST_CASE("two-combined-step scan with only 2 retained") {
  const TwoCycleScan scan = two_cycle_analytic(parse_problem("H:5:2"));
  CHECK(scan.solutions == std::vector<std::pair<Natural, Natural>>{{1, 31}});
  REQUIRE(scan.candidates.size() == 4);
  CHECK(scan.candidates[1] == TwoCycleCandidate{2, 28, TwoCycleRejection::CofactorRetained});
  CHECK(scan.candidates[2] == TwoCycleCandidate{3, 27, TwoCycleRejection::NotSmooth});
  CHECK(scan.candidates[3] == TwoCycleCandidate{6, 26, TwoCycleRejection::NotSmooth});
}

TEST_CASE("two-combined-step scan for the seventh problem") {
  // Divisors of 8 give candidates 1, 2, 4, 8; only n = 2 survives, and the
  // surviving pair is the nontrivial (2, 15, 3, 22) orbit seen in the wild.
  const TwoCycleScan scan = two_cycle_analytic(parse_problem("H:7:2,3"));
  CHECK(scan.solutions == std::vector<std::pair<Natural, Natural>>{{2, 53}});
  REQUIRE(scan.candidates.size() == 4);
  CHECK(scan.candidates[0] == TwoCycleCandidate{1, 57, TwoCycleRejection::CofactorRetained});
  CHECK(scan.candidates[1] == TwoCycleCandidate{2, 53, std::nullopt});
  CHECK(scan.candidates[2] == TwoCycleCandidate{4, 51, TwoCycleRejection::CofactorRetained});
  CHECK(scan.candidates[3] == TwoCycleCandidate{8, 50, TwoCycleRejection::CofactorRetained});
}

TEST_CASE("two-cycle scan outcomes are internally consistent") {
  for (unsigned long c : {5, 7, 11, 13, 17}) {
    const ProblemSpec spec = make_problem(c, make_finite_holdout({2, 3}));
    const TwoCycleScan scan = two_cycle_analytic(spec);
    for (const TwoCycleCandidate& cand : scan.candidates) {
      CAPTURE(c);
      CAPTURE(cand.n);
      // The loop equation itself: c^2 n + c + 1 = k n.
      CHECK(spec.multiplier * spec.multiplier * cand.n + spec.multiplier + 1 ==
            cand.cofactor * cand.n);
      if (!cand.rejected) {
        CHECK(is_smooth(cand.n, spec.rule));
        CHECK(holdout_part(cand.cofactor, spec.rule).h == 1);
        const Natural partner = t_step(spec, cand.n);
        CHECK(partner != cand.n);
        CHECK(t_step(spec, partner) == cand.n);
      } else if (*cand.rejected == TwoCycleRejection::NotSmooth) {
        CHECK_FALSE(is_smooth(cand.n, spec.rule));
      } else if (*cand.rejected == TwoCycleRejection::CofactorRetained) {
        CHECK(is_smooth(cand.n, spec.rule));
        CHECK(holdout_part(cand.cofactor, spec.rule).h != 1);
      }
    }
    for (const auto& [n, cofactor] : scan.solutions) {
      const auto match = std::find_if(scan.candidates.begin(), scan.candidates.end(),
                                      [&](const TwoCycleCandidate& cand) { return cand.n == n; });
      REQUIRE(match != scan.candidates.end());
      CHECK(match->cofactor == cofactor);
      CHECK_FALSE(match->rejected.has_value());
    }
  }
}

TEST_CASE("two-cycle scan requires a finite holdout rule") {
  CHECK_THROWS_AS(two_cycle_analytic(hr2()), ContractError);
  CHECK_THROWS_AS(two_cycle_analytic(d52()), ContractError);
}

TEST_CASE("two-cycle rejection keys") {
  CHECK(two_cycle_rejection_key(TwoCycleRejection::NotSmooth) == "not_smooth");
  CHECK(two_cycle_rejection_key(TwoCycleRejection::CofactorRetained) == "cofactor_retained");
  CHECK(two_cycle_rejection_key(TwoCycleRejection::LoopFailed) == "loop_failed");
}

TEST_CASE("survey walks pool subsets and skips the degenerate ones") {
  SurveyConfig config;
  config.multipliers = {5};
  config.pool = {2, 3};
  config.verify_hi = 100;
  const SurveyReport report = survey(config);

  REQUIRE(report.rows.size() == 3);
  CHECK(report.rows[0].spec.name == "H_{5,{2}}");
  CHECK(report.rows[0].skipped == Triviality::Singleton);
  CHECK_FALSE(report.rows[0].report.has_value());
  CHECK(report.rows[1].spec.name == "H_{5,{3}}");
  CHECK(report.rows[1].skipped == Triviality::Singleton);

  const SurveyRow& live = report.rows[2];
  CHECK(live.spec.name == "H_{5,{2,3}}");
  CHECK_FALSE(live.skipped.has_value());
  REQUIRE(live.report.has_value());
  CHECK(live.report->anomalies.empty());
  CHECK(live.report->total_count() == 100);
  REQUIRE(live.cycles.size() == 1);
  CHECK(live.cycles[0].cycle == std::vector<Natural>{1, 6, 31});
  CHECK_FALSE(live.error.has_value());

  for (const SurveyRow& row : report.rows) CHECK(survey_row_clean(row));
}

TEST_CASE("survey flags a retained multiplier and real anomalies") {
  SurveyConfig retained;
  retained.multipliers = {3};
  retained.pool = {2, 3};
  retained.verify_hi = 50;
  const SurveyReport skip_report = survey(retained);
  REQUIRE(skip_report.rows.size() == 3);
  CHECK(skip_report.rows[2].spec.name == "H_{3,{2,3}}");
  CHECK(skip_report.rows[2].skipped == Triviality::MultiplierRetained);
  CHECK(survey_row_clean(skip_report.rows[2]));

  SurveyConfig seventh;
  seventh.multipliers = {7};
  seventh.pool = {2, 3};
  seventh.verify_hi = 10'000;
  const SurveyReport anomaly_report = survey(seventh);
  REQUIRE(anomaly_report.rows.size() == 3);
  const SurveyRow& bad = anomaly_report.rows[2];
  CHECK(bad.spec.name == "H_{7,{2,3}}");
  REQUIRE(bad.report.has_value());
  REQUIRE(bad.report->anomalies.size() == 1);
  CHECK(bad.report->anomalies[0].n == 2);
  CHECK(bad.report->converged_count() == 9'999);
  REQUIRE(bad.cycles.size() == 1);
  CHECK(bad.cycles[0].cycle == std::vector<Natural>{2, 15, 3, 22});
  CHECK_FALSE(survey_row_clean(bad));
}

TEST_CASE("survey validates its configuration") {
  SurveyConfig good;
  good.multipliers = {5};
  good.pool = {2, 3};
  good.verify_hi = 10;

  auto with = [&](auto mutate) {
    SurveyConfig config = good;
    mutate(config);
    return config;
  };

  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.pool.clear(); })), ContractError);
  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.pool = {4}; })), ContractError);
  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.max_set_size = 1; })), ContractError);
  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.multipliers.clear(); })), ContractError);
  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.multipliers = {1}; })), ContractError);
  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.verify_hi = 0; })), ContractError);
  CHECK_THROWS_AS(survey(with([](SurveyConfig& c) { c.workers = 0; })), ContractError);
}

TEST_CASE("survey csv freeze") {
  SurveyConfig config;
  config.multipliers = {5};
  config.pool = {2, 3};
  config.verify_hi = 100;
  CHECK(survey_csv(survey(config)) ==
        "name,range,converged,cycles,aborts,status\n"
        "\"H_{5,{2}}\",1..100,0,0,0,skipped:singleton\n"
        "\"H_{5,{3}}\",1..100,0,0,0,skipped:singleton\n"
        "\"H_{5,{2,3}}\",1..100,100,1,0,ok\n");
}

TEST_CASE("survey output is run-to-run deterministic") {
  SurveyConfig config;
  config.multipliers = {5, 7};
  config.pool = {2, 3};
  config.verify_hi = 500;
  config.workers = 4;
  CHECK(survey_csv(survey(config)) == survey_csv(survey(config)));
}

TEST_CASE("report types survive a json round trip") {
  const VerificationReport verify_report = verify_range(d52(), 1, 60, Limits{});
  const nlohmann::json verify_json = verify_report;
  CHECK(verify_json.get<VerificationReport>() == verify_report);

  const std::vector<CycleReport> cycles = find_cycles(d52(), 100, Limits{});
  for (const CycleReport& report : cycles) {
    const nlohmann::json cycle_json = report;
    CHECK(cycle_json.get<CycleReport>() == report);
  }

  const TwoCycleScan scan = two_cycle_analytic(h5());
  const nlohmann::json scan_json = scan;
  CHECK(scan_json.get<TwoCycleScan>() == scan);

  for (bool record : {false, true}) {
    const TrajectoryRecord record_value = run_trajectory(h5(), 28, Limits{}, record);
    const nlohmann::json record_json = record_value;
    CHECK(record_json.get<TrajectoryRecord>() == record_value);
  }

  const std::vector<Classification> all{
      ReachedOne{9}, EnteredCycle{{13, 66}, 2}, DroppedBelowFloor{4, 1},
      AbortedSteps{}, AbortedSize{},           AbortedFactor{"budget gone"},
  };
  for (const Classification& c : all) {
    const nlohmann::json c_json = c;
    CHECK(c_json.get<Classification>() == c);
  }

  const Limits limits{.max_g_steps = 5, .max_value_bits = 64, .floor = 3};
  const nlohmann::json limits_json = limits;
  CHECK(limits_json.get<Limits>() == limits);

  const ProblemSpec spec = hr2();
  const nlohmann::json spec_json = spec;
  CHECK(spec_json.get<ProblemSpec>() == spec);
}

TEST_CASE("naturals ride json as decimal strings") {
  const nlohmann::json big = Natural("123456789012345678901234567890");
  CHECK(big.is_string());
  CHECK(big.get<std::string>() == "123456789012345678901234567890");
  CHECK(big.get<Natural>() == Natural("123456789012345678901234567890"));
}
