#include "holdout/problem.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

#include "holdout/errors.hpp"

namespace holdout {

namespace {

std::vector<Natural> canonical_prime_set(std::vector<Natural> primes, const char* what) {
  if (primes.empty()) throw ParseError(std::string(what) + ": prime set must be non-empty");
  std::sort(primes.begin(), primes.end());
  for (std::size_t i = 0; i < primes.size(); ++i) {
    if (i > 0 && primes[i] == primes[i - 1]) {
      throw ParseError(std::string(what) + ": duplicate prime " + to_decimal(primes[i]));
    }
    if (!is_prime(primes[i])) {
      throw ParseError(std::string(what) + ": " + to_decimal(primes[i]) + " is not prime");
    }
  }
  return primes;
}

std::string join(const std::vector<Natural>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += to_decimal(values[i]);
  }
  return out;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = text.find(sep, begin);
    parts.emplace_back(text.substr(begin, end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return parts;
}

std::vector<Natural> parse_list(std::string_view text) {
  std::vector<Natural> values;
  for (const std::string& part : split(text, ',')) values.push_back(parse_natural(part));
  return values;
}

}  // namespace

RetentionRule make_finite_holdout(std::vector<Natural> primes) {
  return FiniteHoldout{canonical_prime_set(std::move(primes), "holdout set")};
}

RetentionRule make_residue_holdout(Natural modulus, std::vector<Natural> residues) {
  if (modulus < 2) throw ParseError("residue holdout: modulus must be >= 2");
  if (residues.empty()) throw ParseError("residue holdout: residue set must be non-empty");
  for (Natural& r : residues) r %= modulus;
  std::sort(residues.begin(), residues.end());
  residues.erase(std::unique(residues.begin(), residues.end()), residues.end());
  return ResidueHoldout{std::move(modulus), std::move(residues)};
}

RetentionRule make_divisor_set(std::vector<Natural> primes) {
  return DivisorSet{canonical_prime_set(std::move(primes), "divisor set")};
}

bool is_holdout_rule(const RetentionRule& rule) {
  return !std::holds_alternative<DivisorSet>(rule);
}

bool rule_retains(const RetentionRule& rule, const Natural& prime) {
  return std::visit(
      [&](const auto& r) -> bool {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FiniteHoldout>) {
          return std::binary_search(r.primes.begin(), r.primes.end(), prime);
        } else if constexpr (std::is_same_v<R, ResidueHoldout>) {
          return std::binary_search(r.residues.begin(), r.residues.end(),
                                    Natural(prime % r.modulus));
        } else {
          return !std::binary_search(r.primes.begin(), r.primes.end(), prime);
        }
      },
      rule);
}

ProblemSpec make_problem(Natural multiplier, RetentionRule rule, std::string name) {
  if (multiplier < 2) throw ParseError("multiplier must be >= 2");
  if (name.empty()) name = default_name(multiplier, rule);
  return ProblemSpec{std::move(multiplier), std::move(rule), std::move(name)};
}

std::string default_name(const Natural& multiplier, const RetentionRule& rule) {
  std::ostringstream out;
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FiniteHoldout>) {
          out << "H_{" << to_decimal(multiplier) << ",{" << join(r.primes) << "}}";
        } else if constexpr (std::is_same_v<R, ResidueHoldout>) {
          out << "H_{" << to_decimal(multiplier) << ",{p=" << join(r.residues) << " (mod "
              << to_decimal(r.modulus) << ")}}";
        } else {
          out << "C_{" << to_decimal(multiplier) << ",{" << join(r.primes) << "}}";
        }
      },
      rule);
  return out.str();
}

ProblemSpec parse_problem(std::string_view text) {
  const std::vector<std::string> parts = split(text, ':');
  try {
    if (parts.size() == 3 && parts[0] == "H") {
      return make_problem(parse_natural(parts[1]), make_finite_holdout(parse_list(parts[2])));
    }
    if (parts.size() == 4 && parts[0] == "HR") {
      return make_problem(parse_natural(parts[1]),
                          make_residue_holdout(parse_natural(parts[2]), parse_list(parts[3])));
    }
    if (parts.size() == 3 && parts[0] == "D") {
      return make_problem(parse_natural(parts[1]), make_divisor_set(parse_list(parts[2])));
    }
  } catch (const ParseError& e) {
    throw ParseError("invalid problem '" + std::string(text) + "': " + e.what());
  }
  throw ParseError("invalid problem '" + std::string(text) +
                   "': expected H:<c>:<p,...> | HR:<c>:<m>:<r,...> | D:<c>:<p,...>");
}

std::string problem_text(const ProblemSpec& spec) {
  std::ostringstream out;
  std::visit(
      [&](const auto& r) {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FiniteHoldout>) {
          out << "H:" << to_decimal(spec.multiplier) << ':' << join(r.primes);
        } else if constexpr (std::is_same_v<R, ResidueHoldout>) {
          out << "HR:" << to_decimal(spec.multiplier) << ':' << to_decimal(r.modulus) << ':'
              << join(r.residues);
        } else {
          out << "D:" << to_decimal(spec.multiplier) << ':' << join(r.primes);
        }
      },
      spec.rule);
  return out.str();
}

namespace {

// Product of p^v_p(n) over the listed primes, and n with them divided out.
std::pair<Natural, Natural> extract_listed(const Natural& n, const std::vector<Natural>& primes) {
  Natural listed = 1;
  Natural rest = n;
  for (const Natural& p : primes) {
    if (rest == 1) break;
    const PadicSplit split = padic_split(rest, p);
    if (split.exponent > 0) {
      Natural power;
      mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), split.exponent);
      listed *= power;
      rest = split.cofactor;
    }
  }
  return {listed, rest};
}

}  // namespace

HoldoutSplit holdout_part(const Natural& n, const RetentionRule& rule,
                          const FactorPolicy& policy) {
  if (n < 1) throw ContractError("holdout_part: n must be >= 1");
  HoldoutSplit out = std::visit(
      [&](const auto& r) -> HoldoutSplit {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, FiniteHoldout>) {
          auto [kept, rest] = extract_listed(n, r.primes);
          return {kept, rest};
        } else if constexpr (std::is_same_v<R, ResidueHoldout>) {
          Natural kept = 1;
          for (const auto& [prime, exponent] : factorize(n, policy)) {
            if (std::binary_search(r.residues.begin(), r.residues.end(),
                                   Natural(prime % r.modulus))) {
              Natural power;
              mpz_pow_ui(power.get_mpz_t(), prime.get_mpz_t(), exponent);
              kept *= power;
            }
          }
          return {kept, n / kept};
        } else {
          auto [divided, rest] = extract_listed(n, r.primes);
          return {rest, divided};
        }
      },
      rule);
  assert(out.h * out.removed == n);
  return out;
}

bool is_smooth(const Natural& n, const RetentionRule& rule, const FactorPolicy& policy) {
  return holdout_part(n, rule, policy).removed == 1;
}

Natural g_step(const ProblemSpec& spec, const Natural& n, const FactorPolicy& policy) {
  const HoldoutSplit split = holdout_part(n, spec.rule, policy);
  if (split.removed == 1) return spec.multiplier * n + 1;
  return split.h;
}

Natural t_step(const ProblemSpec& spec, const Natural& n, const FactorPolicy& policy) {
  if (!is_holdout_rule(spec.rule)) {
    throw ContractError("t_step: defined for holdout rules only");
  }
  if (!is_smooth(n, spec.rule, policy)) {
    throw ContractError("t_step: " + to_decimal(n) + " is not smooth for the rule");
  }
  return holdout_part(spec.multiplier * n + 1, spec.rule, policy).h;
}

std::string_view triviality_key(Triviality t) {
  switch (t) {
    case Triviality::Singleton:
      return "singleton";
    case Triviality::MultiplierRetained:
      return "multiplier_retained";
  }
  return "unknown";
}

std::optional<Triviality> is_trivial(const ProblemSpec& spec) {
  if (const auto* finite = std::get_if<FiniteHoldout>(&spec.rule)) {
    if (finite->primes.size() == 1) return Triviality::Singleton;
    if (std::binary_search(finite->primes.begin(), finite->primes.end(), spec.multiplier)) {
      return Triviality::MultiplierRetained;
    }
    return std::nullopt;
  }
  if (const auto* residue = std::get_if<ResidueHoldout>(&spec.rule)) {
    // Cardinality is not decidable for a residue class; only the
    // multiplier-membership screen applies.
    if (is_prime(spec.multiplier) &&
        std::binary_search(residue->residues.begin(), residue->residues.end(),
                           Natural(spec.multiplier % residue->modulus))) {
      return Triviality::MultiplierRetained;
    }
    return std::nullopt;
  }
  throw ContractError("is_trivial: defined for holdout rules only");
}

}  // namespace holdout
