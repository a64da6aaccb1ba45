#include <cstdint>
#include <string>
#include <vector>

#include <doctest.h>

#include "holdout/errors.hpp"
#include "holdout/paperprops.hpp"

using namespace holdout;

namespace {

// Independent re-derivation of the combined step for the 5n+1 problem with
// {2, 3} retained, in plain machine words: keep exactly the 2s and 3s of
// 5n + 1.
std::uint64_t keep23(std::uint64_t m) {
  std::uint64_t kept = 1;
  while (m % 2 == 0) {
    kept *= 2;
    m /= 2;
  }
  while (m % 3 == 0) {
    kept *= 3;
    m /= 3;
  }
  return kept;
}

std::uint64_t t5(std::uint64_t n) { return keep23(5 * n + 1); }

std::uint64_t pow_u64(std::uint64_t base, std::uint32_t exp) {
  std::uint64_t out = 1;
  while (exp-- > 0) out *= base;
  return out;
}

void check_clean_pass(const PropertyResult& result, const char* id,
                      std::uint64_t instances) {
  CAPTURE(id);
  CHECK(result.lemma_id == id);
  CHECK(result.passed);
  CHECK(result.failures.empty());
  CHECK(result.tested_instances == instances);
}

}  // namespace

TEST_CASE("smooth grid collapses in one combined step") {
  check_clean_pass(check_lemma_3_1(5, 5), "3.1", 25);

  // The claim itself, recomputed in machine words.
  for (std::uint32_t a = 1; a <= 5; ++a) {
    for (std::uint32_t b = 1; b <= 5; ++b) {
      CHECK(t5(pow_u64(2, a) * pow_u64(3, b)) == 1);
    }
  }
}

TEST_CASE("odd powers of two collapse in one combined step") {
  check_clean_pass(check_lemma_3_2(9), "3.2", 9);
  for (std::uint32_t a = 1; a <= 9; ++a) {
    CHECK(t5(pow_u64(2, 2 * a + 1)) == 1);
  }
}

TEST_CASE("even powers of three step to two, then to one") {
  check_clean_pass(check_lemma_3_3(6), "3.3", 6);
  for (std::uint32_t a = 1; a <= 6; ++a) {
    CHECK(t5(pow_u64(3, 2 * a)) == 2);
  }
  CHECK(t5(2) == 1);
}

TEST_CASE("a shedding combined step descends and sheds at least 7") {
  const PropertyResult result = check_lemma_3_4(1'000);
  CHECK(result.lemma_id == "3.4");
  CHECK(result.passed);
  CHECK(result.tested_instances == 37);
  CHECK(result.notes == "ascending_skipped=2");

  // Recount: smooth values in [2, 1000] split 37 shedding + 2 ascending.
  std::uint64_t shedding = 0;
  std::uint64_t ascending = 0;
  for (std::uint64_t two = 1; two <= 1'000; two *= 2) {
    for (std::uint64_t n = two; n <= 1'000; n *= 3) {
      if (n < 2) continue;
      const std::uint64_t lifted = 5 * n + 1;
      const std::uint64_t stepped = keep23(lifted);
      if (stepped == lifted) {
        ++ascending;
        continue;
      }
      ++shedding;
      CHECK(stepped < n);
      const std::uint64_t shed = lifted / stepped;
      CHECK(shed >= 7);
      CHECK(shed % 2 != 0);
      CHECK(shed % 3 != 0);
      CHECK(shed % 5 != 0);
    }
  }
  CHECK(shedding == 37);
  CHECK(ascending == 2);
}

TEST_CASE("exactly one power of three sits inside the lift window") {
  check_clean_pass(check_lemma_3_5(12), "3.5", 12);
  for (std::uint32_t a = 1; a <= 12; ++a) {
    const std::uint64_t low = pow_u64(3, a);
    const std::uint64_t high = 5 * low + 2;
    std::uint64_t inside = 0;
    for (std::uint64_t p = 1; p <= high; p *= 3) {
      if (p > low && p < high) ++inside;
    }
    CHECK(inside == 1);
    CHECK(3 * low > low);
    CHECK(3 * low < high);
  }
}

TEST_CASE("powers of four descend within two combined steps") {
  check_clean_pass(check_lemma_4_1(8), "4.1", 8);

  bool saw_two_step = false;
  for (std::uint32_t a = 1; a <= 8; ++a) {
    const std::uint64_t n = pow_u64(4, a);
    const std::uint64_t first = t5(n);
    if (first < n) continue;
    // Step one shed nothing, so the next lift is 25 * 4^a + 6 and must carry
    // exactly one factor of 2 before stripping brings the value below n.
    saw_two_step = true;
    CHECK(first == 5 * n + 1);
    const std::uint64_t second_lift = 5 * first + 1;
    CHECK(second_lift == 25 * n + 6);
    CHECK(second_lift % 2 == 0);
    CHECK(second_lift % 4 != 0);
    CHECK(t5(first) < n);
  }
  CHECK(saw_two_step);  // a = 2 takes the long branch: 16 -> 81 -> 2
}

TEST_CASE("powers of three descend within three steps or loop") {
  const PropertyResult result = check_lemma_4_2(12);
  CHECK(result.lemma_id == "4.2");
  CHECK(result.passed);
  CHECK(result.tested_instances == 12);
  CHECK(result.notes == "descended=12,two_cycle=0");

  for (std::uint32_t a = 1; a <= 12; ++a) {
    const std::uint64_t n = pow_u64(3, a);
    std::uint64_t value = n;
    bool descended = false;
    for (int step = 0; step < 3 && !descended; ++step) {
      value = t5(value);
      descended = value < n;
    }
    const bool two_cycle = !descended && t5(t5(n)) == n && t5(n) != n;
    CHECK((descended || two_cycle));
  }
}

TEST_CASE("the 2n+1 lift of an odd number is 3 mod 4") {
  check_clean_pass(check_lemma_5_1(1'000), "5.1", 500);
  for (std::uint64_t n = 1; n <= 1'001; n += 2) {
    CHECK((2 * n + 1) % 4 == 3);
  }
}

TEST_CASE("the full battery at small scale") {
  const std::vector<PropertyResult> results = run_all(Scale::Small);
  REQUIRE(results.size() == 8);

  const std::vector<std::string> ids{"3.1", "3.2", "3.3", "3.4",
                                     "3.5", "4.1", "4.2", "5.1"};
  const std::vector<std::uint64_t> instances{100, 10, 10, 37, 10, 10, 10, 500};
  for (std::size_t i = 0; i < results.size(); ++i) {
    CAPTURE(i);
    CHECK(results[i].lemma_id == ids[i]);
    CHECK(results[i].passed);
    CHECK(results[i].tested_instances == instances[i]);
    CHECK(results[i].passed == results[i].failures.empty());
  }
  CHECK(results[3].notes == "ascending_skipped=2");
  CHECK(results[6].notes == "descended=10,two_cycle=0");
}

TEST_CASE("the full battery at standard scale") {
  const std::vector<PropertyResult> results = run_all(Scale::Standard);
  REQUIRE(results.size() == 8);
  const std::vector<std::uint64_t> instances{400, 30, 20, 64, 40, 20, 15, 50'000};
  for (std::size_t i = 0; i < results.size(); ++i) {
    CAPTURE(i);
    CHECK(results[i].passed);
    CHECK(results[i].tested_instances == instances[i]);
  }
  CHECK(results[3].notes == "ascending_skipped=2");
  CHECK(results[6].notes == "descended=15,two_cycle=0");
}

TEST_CASE("degenerate bounds are rejected") {
  CHECK_THROWS_AS(check_lemma_3_1(0, 5), ContractError);
  CHECK_THROWS_AS(check_lemma_3_2(0), ContractError);
  CHECK_THROWS_AS(check_lemma_3_4(1), ContractError);
  CHECK_THROWS_AS(check_lemma_5_1(0), ContractError);
}
