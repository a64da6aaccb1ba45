#include "holdout/numtheory.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <utility>

#include "holdout/errors.hpp"

namespace holdout {

Natural parse_natural(std::string_view text) {
  if (text.empty()) throw ParseError("empty number");
  for (char ch : text) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw ParseError("not a decimal natural: '" + std::string(text) + "'");
    }
  }
  Natural n;
  mpz_set_str(n.get_mpz_t(), std::string(text).c_str(), 10);
  return n;
}

namespace {

constexpr std::uint32_t kTableLimit = 4096;

std::vector<std::uint32_t> build_prime_table() {
  std::vector<bool> composite(kTableLimit + 1, false);
  std::vector<std::uint32_t> primes;
  for (std::uint32_t i = 2; i <= kTableLimit; ++i) {
    if (composite[i]) continue;
    primes.push_back(i);
    for (std::uint64_t j = std::uint64_t{i} * i; j <= kTableLimit; j += i) {
      composite[j] = true;
    }
  }
  return primes;
}

const std::vector<std::uint32_t>& table() {
  static const std::vector<std::uint32_t> t = build_prime_table();
  return t;
}

// Witness set covering all n < 3.3e24, well past 2^64.
constexpr std::array<std::uint64_t, 7> kWitnesses = {
    2, 325, 9375, 28178, 450775, 9780504, 1795265022};

// One strong-probable-prime round for odd n >= 3.
bool strong_probable_prime(const Natural& n, const Natural& base) {
  Natural d = n - 1;
  const mp_bitcnt_t twos = mpz_scan1(d.get_mpz_t(), 0);
  mpz_tdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), twos);
  Natural x;
  mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
  if (x == 1 || x == n - 1) return true;
  for (mp_bitcnt_t i = 1; i < twos; ++i) {
    x = x * x % n;
    if (x == n - 1) return true;
  }
  return false;
}

class EffortMeter {
 public:
  explicit EffortMeter(std::uint64_t budget) : budget_(budget) {}

  void spend() {
    if (++used_ > budget_) {
      throw BudgetError("factoring budget exhausted; increase budget");
    }
  }

 private:
  std::uint64_t used_ = 0;
  std::uint64_t budget_;
};

// Brent's cycle-finding rho. Returns a nontrivial divisor of n, which must be
// odd, composite, and free of table primes.
Natural rho_split(const Natural& n, const FactorPolicy& policy, EffortMeter& meter) {
  gmp_randclass rng(gmp_randinit_mt);
  rng.seed(Natural(policy.seed) * 0x9e3779b97f4a7c15_mpz + n);

  for (std::uint64_t attempt = 0;; ++attempt) {
    Natural y, c;
    if (attempt < 8) {
      y = rng.get_z_range(n - 3) + 2;
      c = rng.get_z_range(n - 3) + 1;
    } else {
      // Deterministic fallback sweep once the random attempts strike out.
      y = 2;
      c = attempt - 7;
    }

    const auto advance = [&](Natural& v) {
      meter.spend();
      v = (v * v + c) % n;
    };

    Natural x, ys, q = 1, g = 1;
    std::uint64_t r = 1;
    constexpr std::uint64_t kBatch = 128;
    while (g == 1) {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) advance(y);
      std::uint64_t k = 0;
      while (k < r && g == 1) {
        ys = y;
        const std::uint64_t steps = std::min(kBatch, r - k);
        for (std::uint64_t i = 0; i < steps; ++i) {
          advance(y);
          q = q * abs(x - y) % n;
        }
        g = gcd(q, n);
        k += steps;
      }
      r *= 2;
    }
    if (g == n) {
      // Backtrack one step at a time from the last batch start.
      do {
        advance(ys);
        g = gcd(abs(x - ys), n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

}  // namespace

std::span<const std::uint32_t> small_prime_table() {
  return {table().data(), table().size()};
}

PadicSplit padic_split(const Natural& n, const Natural& p) {
  if (n == 0) throw ContractError("padic_split: n must be >= 1");
  if (p < 2) throw ContractError("padic_split: p must be a prime >= 2");
  PadicSplit out;
  out.exponent = mpz_remove(out.cofactor.get_mpz_t(), n.get_mpz_t(), p.get_mpz_t());
  return out;
}

bool is_prime(const Natural& n) {
  if (n < 2) return false;
  for (std::uint32_t p : table()) {
    if (Natural(p) * p > n) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return n == p;
  }
  // All table primes tried; anything below kTableLimit^2 is prime by now.
  if (n < Natural(kTableLimit) * kTableLimit) return true;
  if (bit_length(n) <= 64) {
    for (std::uint64_t w : kWitnesses) {
      Natural base = Natural(w) % n;
      if (base <= 1) continue;
      if (!strong_probable_prime(n, base)) return false;
    }
    return true;
  }
  // BPSW plus 66 extra Miller-Rabin rounds: error < 2^-128.
  return mpz_probab_prime_p(n.get_mpz_t(), 90) > 0;
}

Factorization factorize(const Natural& n, const FactorPolicy& policy) {
  if (n < 1) throw ContractError("factorize: n must be >= 1");
  std::map<Natural, std::uint32_t> acc;
  Natural rem = n;
  for (std::uint32_t p : table()) {
    if (Natural(p) * p > rem) break;
    if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      const PadicSplit split = padic_split(rem, p);
      acc[p] += static_cast<std::uint32_t>(split.exponent);
      rem = split.cofactor;
    }
  }
  if (rem > 1 && rem < Natural(kTableLimit) * kTableLimit) {
    acc[rem] += 1;
    rem = 1;
  }

  if (rem > 1) {
    EffortMeter meter(policy.budget);
    std::vector<std::pair<Natural, std::uint32_t>> work{{rem, 1}};
    while (!work.empty()) {
      auto [m, mult] = std::move(work.back());
      work.pop_back();
      if (is_prime(m)) {
        acc[m] += mult;
        continue;
      }
      if (mpz_perfect_power_p(m.get_mpz_t())) {
        for (std::uint32_t k = 2; k <= bit_length(m); ++k) {
          Natural root, remainder;
          mpz_rootrem(root.get_mpz_t(), remainder.get_mpz_t(), m.get_mpz_t(), k);
          if (remainder == 0) {
            work.emplace_back(root, mult * k);
            break;
          }
        }
        continue;
      }
      const Natural d = rho_split(m, policy, meter);
      work.emplace_back(d, mult);
      work.emplace_back(m / d, mult);
    }
  }

  Factorization out;
  out.reserve(acc.size());
  for (auto& [prime, exponent] : acc) out.push_back({prime, exponent});
  return out;
}

Natural recompose(const Factorization& factors) {
  Natural n = 1;
  for (const auto& [prime, exponent] : factors) {
    Natural power;
    mpz_pow_ui(power.get_mpz_t(), prime.get_mpz_t(), exponent);
    n *= power;
  }
  return n;
}

std::vector<Natural> divisors(const Natural& n, const FactorPolicy& policy) {
  std::vector<Natural> out{1};
  for (const auto& [prime, exponent] : factorize(n, policy)) {
    const std::size_t existing = out.size();
    Natural power = 1;
    for (std::uint32_t e = 1; e <= exponent; ++e) {
      power *= prime;
      for (std::size_t i = 0; i < existing; ++i) out.push_back(out[i] * power);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace holdout
