// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/models/toy_quadratic.hpp"

#include <cmath>

#include "morkit/error.hpp"

namespace morkit
{

ToyQuadratic build_toy_quadratic(Index M, double mu_max, double c1, double c2, int beta_sign)
{
  if (M < 3)
    throw PreconditionViolation("toy model needs at least three samples");
  if (!(c1 > c2 && c2 > 0.0))
    throw PreconditionViolation("toy model needs c1 > c2 > 0");
  if (!(mu_max > 0.0))
    throw PreconditionViolation("toy model needs mu_max > 0");
  if (beta_sign != 1 && beta_sign != -1)
    throw PreconditionViolation("beta_sign must be +1 or -1");

  // Fill the left half and mirror it so the grid is symmetric bit for bit.
  Vector mu(M);
  for (Index i = 0; i < M / 2; ++i)
  {
    mu(i) = -mu_max + 2.0 * mu_max * static_cast<double>(i) / static_cast<double>(M - 1);
    mu(M - 1 - i) = -mu(i);
  }
  if (M % 2 == 1)
    mu(M / 2) = 0.0;

  const double m2 = mu.array().square().mean();
  const double m4 = mu.array().square().square().mean();
  const double excess = m4 / (m2 * m2) - 1.0;
  if (!(excess > 0.0))
    throw InfeasibleConstraints("grid moments leave no real solution for beta");

  ToySnapshotConfig cfg;
  cfg.M = M;
  cfg.mu_max = mu_max;
  cfg.c1 = c1;
  cfg.c2 = c2;
  cfg.alpha = 1.0 / std::sqrt(m2);
  cfg.beta = beta_sign / std::sqrt(excess);
  cfg.gamma = -cfg.beta / m2;

  Matrix S(2, M);
  for (Index i = 0; i < M; ++i)
  {
    S(0, i) = c1 * cfg.alpha * mu(i);
    S(1, i) = c2 * (cfg.beta + cfg.gamma * mu(i) * mu(i));
  }
  return ToyQuadratic{cfg, std::move(mu), std::move(S)};
}

}  // namespace morkit
