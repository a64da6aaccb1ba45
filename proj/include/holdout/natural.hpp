#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <string>
#include <string_view>

namespace holdout {

// Unbounded non-negative integer. Growth streaks under cn+1 outrun any fixed
// word size, so every quantity that iterates lives on GMP.
using Natural = mpz_class;

// Number of bits in the binary expansion; bit_length(0) == 1 by GMP convention.
inline std::size_t bit_length(const Natural& n) {
  return mpz_sizeinbase(n.get_mpz_t(), 2);
}

// Parses a decimal natural. Rejects signs, whitespace and empty input.
Natural parse_natural(std::string_view text);

inline std::string to_decimal(const Natural& n) { return n.get_str(10); }

}  // namespace holdout
