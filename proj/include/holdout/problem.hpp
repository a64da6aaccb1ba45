#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "holdout/numtheory.hpp"

namespace holdout {

// Primes kept between linear applications, given as an explicit finite set.
struct FiniteHoldout {
  std::vector<Natural> primes;  // ascending, distinct, prime

  friend bool operator==(const FiniteHoldout&, const FiniteHoldout&) = default;
};

// Infinite holdout set cut out by a residue class: keep p iff
// p mod modulus is one of the residues.
struct ResidueHoldout {
  Natural modulus;                // >= 2
  std::vector<Natural> residues;  // reduced mod modulus, ascending, distinct

  friend bool operator==(const ResidueHoldout&, const ResidueHoldout&) = default;
};

// Classical divisor problem: these primes get divided out, everything else
// is kept.
struct DivisorSet {
  std::vector<Natural> primes;  // ascending, distinct, prime

  friend bool operator==(const DivisorSet&, const DivisorSet&) = default;
};

using RetentionRule = std::variant<FiniteHoldout, ResidueHoldout, DivisorSet>;

// Factories validate and canonicalize (sort, reduce residues). They throw
// ParseError on bad input since rules originate from user-provided text.
RetentionRule make_finite_holdout(std::vector<Natural> primes);
RetentionRule make_residue_holdout(Natural modulus, std::vector<Natural> residues);
RetentionRule make_divisor_set(std::vector<Natural> primes);

bool is_holdout_rule(const RetentionRule& rule);

// Whether a prime is kept by the rule (for DivisorSet: whether it is NOT in
// the divisor set).
bool rule_retains(const RetentionRule& rule, const Natural& prime);

struct ProblemSpec {
  Natural multiplier;  // c >= 2; the affine offset is always +1
  RetentionRule rule;
  std::string name;  // display form, e.g. "H_{5,{2,3}}"

  friend bool operator==(const ProblemSpec&, const ProblemSpec&) = default;
};

// Empty name picks the default display form.
ProblemSpec make_problem(Natural multiplier, RetentionRule rule, std::string name = "");

std::string default_name(const Natural& multiplier, const RetentionRule& rule);

// Text grammar: H:<c>:<p,...> | HR:<c>:<m>:<r,...> | D:<c>:<p,...>
ProblemSpec parse_problem(std::string_view text);
std::string problem_text(const ProblemSpec& spec);

// n split into the part that survives the rule (h) and the part divided out.
// Always h * removed == n.
struct HoldoutSplit {
  Natural h;
  Natural removed;

  friend bool operator==(const HoldoutSplit&, const HoldoutSplit&) = default;
};

HoldoutSplit holdout_part(const Natural& n, const RetentionRule& rule,
                          const FactorPolicy& policy = {});

// n equals its own surviving part (every prime factor kept).
bool is_smooth(const Natural& n, const RetentionRule& rule, const FactorPolicy& policy = {});

// One application of the map: multiply when nothing can be removed, divide
// otherwise. Never both.
Natural g_step(const ProblemSpec& spec, const Natural& n, const FactorPolicy& policy = {});

// Combined step for holdout rules: cn + 1 followed by removal of every
// non-retained prime. Requires smooth n.
Natural t_step(const ProblemSpec& spec, const Natural& n, const FactorPolicy& policy = {});

enum class Triviality { Singleton, MultiplierRetained };

std::string_view triviality_key(Triviality t);

// Screens for the two degenerate holdout families: a single retained prime,
// or a multiplier that is itself retained. Divisor specs are out of contract.
std::optional<Triviality> is_trivial(const ProblemSpec& spec);

}  // namespace holdout
