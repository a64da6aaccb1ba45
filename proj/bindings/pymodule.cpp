// primeholdout._core: thin bindings over the verification engine. Naturals
// cross the boundary as decimal strings and reports as JSON strings; the
// package wrapper turns them into ints and dicts.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "holdout/errors.hpp"
#include "holdout/paperprops.hpp"
#include "holdout/report_json.hpp"
#include "holdout/trajectory.hpp"
#include "holdout/verify.hpp"

namespace py = pybind11;

namespace {

holdout::Limits make_limits(std::uint64_t max_steps, std::uint32_t max_bits) {
  holdout::Limits limits;
  limits.max_g_steps = max_steps;
  limits.max_value_bits = max_bits;
  return limits;
}

std::vector<holdout::Natural> to_naturals(const std::vector<std::string>& texts) {
  std::vector<holdout::Natural> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) out.push_back(holdout::parse_natural(text));
  return out;
}

holdout::Scale scale_of(const std::string& text) {
  if (text == "small") return holdout::Scale::Small;
  if (text == "standard") return holdout::Scale::Standard;
  throw holdout::ParseError("scale must be small or standard, got: " + text);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "verification engine for prime holdout and divisor iteration problems";

  py::register_exception<holdout::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<holdout::ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<holdout::BudgetError>(m, "BudgetError", PyExc_RuntimeError);

  m.def("problem_name", [](const std::string& problem) {
    return holdout::parse_problem(problem).name;
  }, py::arg("problem"), "canonical display name for a problem text");

  m.def("is_prime", [](const std::string& n) {
    return holdout::is_prime(holdout::parse_natural(n));
  }, py::arg("n"));

  m.def("factorize", [](const std::string& n, std::uint64_t seed) {
    std::vector<std::pair<std::string, std::uint32_t>> out;
    for (const auto& pp : holdout::factorize(holdout::parse_natural(n),
                                             holdout::FactorPolicy{seed})) {
      out.emplace_back(holdout::to_decimal(pp.prime), pp.exponent);
    }
    return out;
  }, py::arg("n"), py::arg("seed") = 0);

  m.def("padic_split", [](const std::string& n, const std::string& p) {
    const holdout::PadicSplit split =
        holdout::padic_split(holdout::parse_natural(n), holdout::parse_natural(p));
    return std::pair<std::uint64_t, std::string>{split.exponent,
                                                 holdout::to_decimal(split.cofactor)};
  }, py::arg("n"), py::arg("p"));

  m.def("holdout_part", [](const std::string& problem, const std::string& n) {
    const holdout::ProblemSpec spec = holdout::parse_problem(problem);
    const holdout::HoldoutSplit split =
        holdout::holdout_part(holdout::parse_natural(n), spec.rule);
    return std::pair<std::string, std::string>{holdout::to_decimal(split.h),
                                               holdout::to_decimal(split.removed)};
  }, py::arg("problem"), py::arg("n"));

  m.def("is_smooth", [](const std::string& problem, const std::string& n) {
    const holdout::ProblemSpec spec = holdout::parse_problem(problem);
    return holdout::is_smooth(holdout::parse_natural(n), spec.rule);
  }, py::arg("problem"), py::arg("n"));

  m.def("g_step", [](const std::string& problem, const std::string& n) {
    return holdout::to_decimal(
        holdout::g_step(holdout::parse_problem(problem), holdout::parse_natural(n)));
  }, py::arg("problem"), py::arg("n"));

  m.def("t_step", [](const std::string& problem, const std::string& n) {
    return holdout::to_decimal(
        holdout::t_step(holdout::parse_problem(problem), holdout::parse_natural(n)));
  }, py::arg("problem"), py::arg("n"));

  m.def("is_trivial", [](const std::string& problem) -> py::object {
    const auto reason = holdout::is_trivial(holdout::parse_problem(problem));
    if (!reason) return py::none();
    return py::str(std::string(holdout::triviality_key(*reason)));
  }, py::arg("problem"));

  m.def("run_trajectory_json",
        [](const std::string& problem, const std::string& n, std::uint64_t max_steps,
           std::uint32_t max_bits, bool record, std::uint64_t seed) {
          const holdout::TrajectoryRecord record_out = holdout::run_trajectory(
              holdout::parse_problem(problem), holdout::parse_natural(n),
              make_limits(max_steps, max_bits), record, holdout::FactorPolicy{seed});
          return holdout::json(record_out).dump();
        },
        py::arg("problem"), py::arg("n"), py::arg("max_steps") = holdout::Limits{}.max_g_steps,
        py::arg("max_bits") = holdout::Limits{}.max_value_bits, py::arg("record") = false,
        py::arg("seed") = 0);

  m.def("verify_range_json",
        [](const std::string& problem, const std::string& lo, const std::string& hi,
           std::uint64_t max_steps, std::uint32_t max_bits, std::uint32_t workers,
           std::uint64_t seed) {
          const holdout::ProblemSpec spec = holdout::parse_problem(problem);
          const holdout::Natural lo_n = holdout::parse_natural(lo);
          const holdout::Natural hi_n = holdout::parse_natural(hi);
          const holdout::Limits limits = make_limits(max_steps, max_bits);
          holdout::VerificationReport report;
          {
            py::gil_scoped_release release;
            report = holdout::verify_range(spec, lo_n, hi_n, limits, workers, seed);
          }
          return holdout::json(report).dump();
        },
        py::arg("problem"), py::arg("lo"), py::arg("hi"),
        py::arg("max_steps") = holdout::Limits{}.max_g_steps,
        py::arg("max_bits") = holdout::Limits{}.max_value_bits, py::arg("workers") = 1,
        py::arg("seed") = 0);

  m.def("find_cycles_json",
        [](const std::string& problem, const std::string& bound, std::uint64_t max_steps,
           std::uint32_t max_bits, std::uint64_t seed) {
          const holdout::ProblemSpec spec = holdout::parse_problem(problem);
          const holdout::Natural bound_n = holdout::parse_natural(bound);
          const holdout::Limits limits = make_limits(max_steps, max_bits);
          std::vector<holdout::CycleReport> cycles;
          {
            py::gil_scoped_release release;
            cycles = holdout::find_cycles(spec, bound_n, limits, holdout::FactorPolicy{seed});
          }
          return holdout::json(cycles).dump();
        },
        py::arg("problem"), py::arg("bound"),
        py::arg("max_steps") = holdout::Limits{}.max_g_steps,
        py::arg("max_bits") = holdout::Limits{}.max_value_bits, py::arg("seed") = 0);

  m.def("two_cycle_analytic_json", [](const std::string& problem, std::uint64_t seed) {
    return holdout::json(holdout::two_cycle_analytic(holdout::parse_problem(problem),
                                                     holdout::FactorPolicy{seed}))
        .dump();
  }, py::arg("problem"), py::arg("seed") = 0);

  m.def("survey_json",
        [](const std::vector<std::string>& multipliers, const std::vector<std::string>& pool,
           std::size_t max_set_size, const std::string& hi, std::uint64_t max_steps,
           std::uint32_t max_bits, std::uint32_t workers, std::uint64_t seed) {
          holdout::SurveyConfig config;
          config.multipliers = to_naturals(multipliers);
          config.pool = to_naturals(pool);
          config.max_set_size = max_set_size;
          config.verify_hi = holdout::parse_natural(hi);
          config.limits = make_limits(max_steps, max_bits);
          config.workers = workers;
          config.seed = seed;
          holdout::SurveyReport report;
          {
            py::gil_scoped_release release;
            report = holdout::survey(config);
          }
          return holdout::json(report).dump();
        },
        py::arg("multipliers"), py::arg("pool"), py::arg("max_set_size") = 2,
        py::arg("hi") = "10000", py::arg("max_steps") = holdout::Limits{}.max_g_steps,
        py::arg("max_bits") = holdout::Limits{}.max_value_bits, py::arg("workers") = 1,
        py::arg("seed") = 0);

  m.def("survey_csv", [](const std::string& report_json_text) {
    holdout::SurveyReport report = holdout::json::parse(report_json_text);
    return holdout::survey_csv(report);
  }, py::arg("report_json"), "render a survey report (as JSON text) to CSV");

  m.def("run_props_json", [](const std::string& scale) {
    std::vector<holdout::PropertyResult> results;
    {
      py::gil_scoped_release release;
      results = holdout::run_all(scale_of(scale));
    }
    return holdout::json(results).dump();
  }, py::arg("scale") = "standard");
}
