// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_MODELS_TOY_QUADRATIC_HPP
#define MORKIT_MODELS_TOY_QUADRATIC_HPP

#include "morkit/numerics/types.hpp"

namespace morkit
{

// Two-dimensional snapshots s(mu) = (c1 alpha mu, c2 (beta + gamma mu^2)) on a
// symmetric uniform grid of [-mu_max, mu_max]. alpha, beta and gamma make both
// coordinate sequences zero-mean with unit mean square, so the snapshot matrix has
// singular values c1 sqrt(M) and c2 sqrt(M) along e1 and e2.
struct ToySnapshotConfig
{
  Index M = 0;
  double mu_max = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct ToyQuadratic
{
  ToySnapshotConfig config;
  Vector mu;          // grid, mu(i) = -mu(M-1-i) exactly
  Matrix snapshots;   // 2 x M
};

// beta_sign selects the root of the normalization (+1 or -1). Throws
// InfeasibleConstraints when the grid moments admit no real beta, and
// PreconditionViolation unless M >= 3 and c1 > c2 > 0.
ToyQuadratic build_toy_quadratic(Index M, double mu_max, double c1, double c2, int beta_sign = 1);

}  // namespace morkit

#endif  // MORKIT_MODELS_TOY_QUADRATIC_HPP
