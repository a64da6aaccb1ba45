#include "holdout/paperprops.hpp"

#include <algorithm>

#include "holdout/errors.hpp"
#include "holdout/numtheory.hpp"

namespace holdout {
namespace {

ProblemSpec five_problem() {
  return make_problem(5, make_finite_holdout({2, 3}));
}

Natural pow_of(unsigned long base, std::uint32_t exponent) {
  Natural out;
  mpz_ui_pow_ui(out.get_mpz_t(), base, exponent);
  return out;
}

void require_bound(std::uint64_t bound, const char* what) {
  if (bound < 1) throw ContractError(std::string(what) + " must be >= 1");
}

PropertyResult finish(PropertyResult result) {
  result.passed = result.failures.empty();
  return result;
}

// Ascending 2^a * 3^b values up to n_max, with a, b >= 0.
std::vector<Natural> smooth_up_to(const Natural& n_max) {
  std::vector<Natural> out;
  for (Natural two = 1; two <= n_max; two *= 2) {
    for (Natural n = two; n <= n_max; n *= 3) out.push_back(n);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PropertyResult check_lemma_3_1(std::uint32_t a_max, std::uint32_t b_max) {
  require_bound(a_max, "check_lemma_3_1: a_max");
  require_bound(b_max, "check_lemma_3_1: b_max");
  const ProblemSpec spec = five_problem();
  PropertyResult result;
  result.lemma_id = "3.1";
  for (std::uint32_t a = 1; a <= a_max; ++a) {
    for (std::uint32_t b = 1; b <= b_max; ++b) {
      const Natural n = pow_of(2, a) * pow_of(3, b);
      ++result.tested_instances;
      if (t_step(spec, n) != 1) result.failures.push_back(n);
    }
  }
  return finish(std::move(result));
}

PropertyResult check_lemma_3_2(std::uint32_t a_max) {
  require_bound(a_max, "check_lemma_3_2: a_max");
  const ProblemSpec spec = five_problem();
  PropertyResult result;
  result.lemma_id = "3.2";
  for (std::uint32_t a = 1; a <= a_max; ++a) {
    const Natural n = pow_of(2, 2 * a + 1);
    ++result.tested_instances;
    if (t_step(spec, n) != 1) result.failures.push_back(n);
  }
  return finish(std::move(result));
}

PropertyResult check_lemma_3_3(std::uint32_t a_max) {
  require_bound(a_max, "check_lemma_3_3: a_max");
  const ProblemSpec spec = five_problem();
  PropertyResult result;
  result.lemma_id = "3.3";
  const bool tail_descends = t_step(spec, 2) == 1;
  for (std::uint32_t a = 1; a <= a_max; ++a) {
    const Natural n = pow_of(3, 2 * a);
    ++result.tested_instances;
    if (t_step(spec, n) != 2 || !tail_descends) result.failures.push_back(n);
  }
  return finish(std::move(result));
}

PropertyResult check_lemma_3_4(const Natural& n_max) {
  if (n_max < 2) throw ContractError("check_lemma_3_4: n_max must be >= 2");
  const ProblemSpec spec = five_problem();
  PropertyResult result;
  result.lemma_id = "3.4";
  std::uint64_t ascending = 0;
  for (const Natural& n : smooth_up_to(n_max)) {
    if (n < 2) continue;
    const Natural lifted = 5 * n + 1;
    const HoldoutSplit split = holdout_part(lifted, spec.rule);
    if (split.removed == 1) {
      // 5n+1 is itself smooth; the step ascends and the lemma says nothing.
      ++ascending;
      continue;
    }
    ++result.tested_instances;
    // The shed cofactor has no factor of 2 or 3 by construction and cannot
    // carry 5 (5n+1 is 1 mod 5), so 7 is the least it can be.
    if (split.h >= n || split.removed < 7) result.failures.push_back(n);
  }
  result.notes = "ascending_skipped=" + std::to_string(ascending);
  return finish(std::move(result));
}

PropertyResult check_lemma_3_5(std::uint32_t a_max) {
  require_bound(a_max, "check_lemma_3_5: a_max");
  PropertyResult result;
  result.lemma_id = "3.5";
  for (std::uint32_t a = 1; a <= a_max; ++a) {
    const Natural lower = pow_of(3, a);
    const Natural upper = 5 * lower + 2;
    std::vector<Natural> inside;
    for (Natural p = 1; p < upper; p *= 3) {
      if (p > lower) inside.push_back(p);
    }
    ++result.tested_instances;
    if (inside.size() != 1 || inside.front() != pow_of(3, a + 1)) {
      result.failures.push_back(lower);
    }
  }
  return finish(std::move(result));
}

PropertyResult check_lemma_4_1(std::uint32_t a_max) {
  require_bound(a_max, "check_lemma_4_1: a_max");
  const ProblemSpec spec = five_problem();
  PropertyResult result;
  result.lemma_id = "4.1";
  for (std::uint32_t a = 1; a <= a_max; ++a) {
    const Natural n = pow_of(4, a);
    ++result.tested_instances;
    const Natural first = t_step(spec, n);
    bool ok;
    if (first < n) {
      ok = true;
    } else {
      ok = t_step(spec, first) < n;
      if (first == 5 * n + 1) {
        // Nothing shed in step one, so the next lift is 25*4^a + 6, which
        // must carry exactly one factor of 2 for the second step to land.
        ok = ok && padic_split(5 * first + 1, 2).exponent == 1;
      }
    }
    if (!ok) result.failures.push_back(n);
  }
  return finish(std::move(result));
}

PropertyResult check_lemma_4_2(std::uint32_t a_max) {
  require_bound(a_max, "check_lemma_4_2: a_max");
  const ProblemSpec spec = five_problem();
  PropertyResult result;
  result.lemma_id = "4.2";
  std::uint64_t descended = 0;
  std::uint64_t looped = 0;
  for (std::uint32_t a = 1; a <= a_max; ++a) {
    const Natural n = pow_of(3, a);
    ++result.tested_instances;
    bool fell = false;
    Natural value = n;
    for (int k = 0; k < 3 && !fell; ++k) {
      value = t_step(spec, value);
      fell = value < n;
    }
    if (fell) {
      ++descended;
      continue;
    }
    // The permitted exception: n sits on a loop of exactly two t-steps.
    const Natural forward = t_step(spec, n);
    if (forward != n && t_step(spec, forward) == n) {
      ++looped;
    } else {
      result.failures.push_back(n);
    }
  }
  result.notes =
      "descended=" + std::to_string(descended) + ",two_cycle=" + std::to_string(looped);
  return finish(std::move(result));
}

PropertyResult check_lemma_5_1(const Natural& n_max) {
  if (n_max < 1) throw ContractError("check_lemma_5_1: n_max must be >= 1");
  PropertyResult result;
  result.lemma_id = "5.1";
  for (Natural n = 1; n <= n_max; n += 2) {
    ++result.tested_instances;
    if ((2 * n + 1) % 4 != 3) result.failures.push_back(n);
  }
  return finish(std::move(result));
}

std::vector<PropertyResult> run_all(Scale scale) {
  const bool standard = scale == Scale::Standard;
  std::vector<PropertyResult> results;
  results.reserve(8);
  results.push_back(standard ? check_lemma_3_1(20, 20) : check_lemma_3_1(10, 10));
  results.push_back(check_lemma_3_2(standard ? 30 : 10));
  results.push_back(check_lemma_3_3(standard ? 20 : 10));
  results.push_back(check_lemma_3_4(standard ? Natural(10'000) : Natural(1'000)));
  results.push_back(check_lemma_3_5(standard ? 40 : 10));
  results.push_back(check_lemma_4_1(standard ? 20 : 10));
  results.push_back(check_lemma_4_2(standard ? 15 : 10));
  results.push_back(check_lemma_5_1(standard ? Natural(100'000) : Natural(1'000)));
  return results;
}

}  // namespace holdout
