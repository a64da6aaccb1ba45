#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "holdout/natural.hpp"

namespace holdout {

struct PrimePower {
  Natural prime;
  std::uint32_t exponent = 1;

  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime decomposition with primes strictly ascending and exponents >= 1.
// The empty list is the factorization of 1.
using Factorization = std::vector<PrimePower>;

// Knobs for the randomized splitter. The seed makes runs reproducible; the
// budget caps f-evaluations per composite and turns a would-be hang into a
// BudgetError.
struct FactorPolicy {
  std::uint64_t seed = 0;
  std::uint64_t budget = std::uint64_t{1} << 22;
};

// n = p^exponent * cofactor with p not dividing cofactor.
struct PadicSplit {
  std::uint64_t exponent = 0;
  Natural cofactor;

  friend bool operator==(const PadicSplit&, const PadicSplit&) = default;
};

// p-adic valuation and cofactor. Requires n >= 1 and prime p (p >= 2 is
// enforced; primality of p is the caller's contract).
PadicSplit padic_split(const Natural& n, const Natural& p);

// Deterministic (fixed witness set) below 2^64; Baillie-PSW plus extra
// Miller-Rabin rounds above, error probability below 2^-128.
bool is_prime(const Natural& n);

// Trial division over a small-prime table, then Brent's rho with a
// deterministic fallback, recursing until every cofactor passes is_prime.
Factorization factorize(const Natural& n, const FactorPolicy& policy = {});

Natural recompose(const Factorization& factors);

// All divisors of n, ascending. Meant for small n (divisor counts explode).
std::vector<Natural> divisors(const Natural& n, const FactorPolicy& policy = {});

std::span<const std::uint32_t> small_prime_table();

}  // namespace holdout
