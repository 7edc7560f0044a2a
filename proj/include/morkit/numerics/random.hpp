// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NUMERICS_RANDOM_HPP
#define MORKIT_NUMERICS_RANDOM_HPP

#include <cstdint>
#include <random>
#include <string_view>

#include "morkit/numerics/types.hpp"

namespace morkit
{

// Deterministic generator. Independent named sub-streams are derived from one
// experiment seed, so adding draws in one component never shifts another.
class Rng
{
public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  Rng stream(std::string_view name) const;

  std::uint64_t seed() const { return seed_; }

  // Uniform in [0, 1) with 53 random bits; identical on every platform.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Standard normal via Box-Muller (platform-independent, unlike std::normal_distribution).
  double normal();
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);

  Matrix uniform_matrix(Index rows, Index cols, double lo = -1.0, double hi = 1.0);
  Matrix normal_matrix(Index rows, Index cols);

  std::mt19937_64 &engine() { return engine_; }

private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

// Columns are i.i.d. uniform points of the box [lower, upper].
Matrix uniform_box(Rng &rng, const Vector &lower, const Vector &upper, Index count);

// Latin hypercube design in [lower, upper]; one point per column.
Matrix latin_hypercube(Rng &rng, const Vector &lower, const Vector &upper, Index count);

// Random orthogonal matrix (QR of a Gaussian matrix with sign fix).
Matrix random_orthogonal(Rng &rng, Index n);

// Random symmetric positive definite matrix with condition number of order `cond`.
Matrix random_spd(Rng &rng, Index n, double cond = 10.0);

}  // namespace morkit

#endif  // MORKIT_NUMERICS_RANDOM_HPP
