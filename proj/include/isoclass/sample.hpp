#pragma once

#include <random>

#include "isoclass/invariant.hpp"

namespace isoclass {

struct SampleOptions {
  int max_dim = 16;
  int max_l = 5;
  int max_mult = 2;
  bool type_o = true;
  bool type_i = true;
  bool type_ii = true;
};

/// A random nonempty valid invariant drawn from a fixed pool of factors
/// (x-1, x+1, several x^2+ax+1 with |a| < 2, several Type II q). The result
/// is not canonicalized. Deterministic in the state of rng.
IsometryInvariant random_invariant(std::mt19937_64& rng, const SampleOptions& opt = {});

/// Random integer matrix with determinant ±1: elementary row operations with
/// coefficients in [-2, 2] followed by a row permutation.
Mat random_unimodular(std::size_t n, std::mt19937_64& rng, int steps = 0);

}  // namespace isoclass
