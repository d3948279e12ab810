#pragma once

#include <random>

#include "isoclass/matrix.hpp"
#include "isoclass/sample.hpp"

namespace isoclass::testing {

inline Rational q(long p, long d = 1) {
  Rational r(p, d);
  r.canonicalize();
  return r;
}

inline Poly X() { return Poly{q(0), q(1)}; }

using isoclass::random_unimodular;

inline Mat random_rational(std::size_t rows, std::size_t cols, std::mt19937_64& rng, int range = 3) {
  std::uniform_int_distribution<long> num(-range, range);
  std::uniform_int_distribution<long> den(1, 3);
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = q(num(rng), den(rng));
  return m;
}

}  // namespace isoclass::testing
