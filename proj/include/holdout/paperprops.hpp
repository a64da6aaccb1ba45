#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holdout/problem.hpp"

namespace holdout {

// One lemma-suite outcome. Failures hold the concrete inputs that broke the
// claim, so any red result can be replayed through run_trajectory by hand.
struct PropertyResult {
  std::string lemma_id;
  std::uint64_t tested_instances = 0;
  std::vector<Natural> failures;
  bool passed = false;
  std::string notes;  // extra detail, e.g. which disjunct carried each instance

  friend bool operator==(const PropertyResult&, const PropertyResult&) = default;
};

// Instance suites for the convergence lemmas of the 5n+1 problem with {2, 3}
// retained, plus the mod-4 step lemma of the 2n+1 problem. Each runs
// exhaustively over its bound; the combined-step count conventions follow the
// proofs (a "step" is one t_step).

// t(2^a * 3^b) = 1 for all 1 <= a <= a_max, 1 <= b <= b_max.
PropertyResult check_lemma_3_1(std::uint32_t a_max, std::uint32_t b_max);

// t(2^(2a+1)) = 1 for 1 <= a <= a_max.
PropertyResult check_lemma_3_2(std::uint32_t a_max);

// t(3^(2a)) = 2 for 1 <= a <= a_max, and the follow-up t(2) = 1.
PropertyResult check_lemma_3_3(std::uint32_t a_max);

// For smooth n in [2, n_max] whose 5n+1 actually sheds a factor: t(n) < n,
// and the shed cofactor is at least 7 (it is coprime to 2, 3 and 5).
PropertyResult check_lemma_3_4(const Natural& n_max);

// The only power of 3 strictly between 3^a and 5*3^a + 2 is 3^(a+1).
PropertyResult check_lemma_3_5(std::uint32_t a_max);

// 4^a descends below itself within two t-steps; when step one sheds nothing,
// the next intermediate 25*4^a + 6 carries exactly one factor of 2.
PropertyResult check_lemma_4_1(std::uint32_t a_max);

// 3^a descends below itself within three t-steps, or sits on a 2-t-cycle.
// Notes record how many instances took each disjunct.
PropertyResult check_lemma_4_2(std::uint32_t a_max);

// (2n+1) mod 4 = 3 for odd n in [1, n_max].
PropertyResult check_lemma_5_1(const Natural& n_max);

enum class Scale { Small, Standard };

// Runs the full battery at preset bounds and returns the eight results in
// lemma order.
std::vector<PropertyResult> run_all(Scale scale);

}  // namespace holdout
