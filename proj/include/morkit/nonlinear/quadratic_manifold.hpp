// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NONLINEAR_QUADRATIC_MANIFOLD_HPP
#define MORKIT_NONLINEAR_QUADRATIC_MANIFOLD_HPP

#include <vector>

#include "morkit/basis/reduced_basis.hpp"
#include "morkit/nonlinear/features.hpp"

namespace morkit
{

// u~ = shift + V q + W Psi(q), with V M-orthonormal and W unconstrained. For the
// full quadratic map W = [C, L, H].
struct QuadManifold
{
  SubspaceBasis V;
  Matrix W;
  FeatureMap feature_map;
  Vector shift;                     // snapshot mean when centered, zero otherwise
  std::vector<Index> selected_modes;  // POD mode indices behind the columns of V
  double objective = 0.0;           // sum of squared X-norm training residuals

  Index latent_dim() const { return V.size(); }
};

// V = first n POD modes; W fitted to the part of each snapshot outside span(V).
// `map` must have input dimension n.
QuadManifold qsvdm_train(const SnapshotMatrix &S, const InnerProduct &metric, Index n,
                         const FeatureMap &map, bool centered = false);

// Greedy selection of n modes from the first r POD modes. Each step adds the candidate
// whose refitted manifold has the smallest training residual; exact ties go to the lower
// mode index. `map` supplies the kind and degree; its input dimension is ignored.
QuadManifold qgm_train(const SnapshotMatrix &S, const InnerProduct &metric, Index n, Index r,
                       const FeatureMap &map, bool centered = false);

// Training residual of the manifold built from the given POD modes (in order). The
// evaluation runs in the coordinates of the weighted SVD, so it is cheap for repeated
// candidate tests. Exposed for verification of the greedy path.
double quad_mode_objective(const WeightedSvd &svd, const std::vector<Index> &modes,
                           const FeatureMap &map);

// q = V^T M (s - shift).
Vector quad_encode(const QuadManifold &m, const Vector &s);
// shift + V q + W Psi(q).
Vector quad_reconstruct(const QuadManifold &m, const Vector &q);
// quad_reconstruct(m, quad_encode(m, s)).
Vector quad_reconstruct_snapshot(const QuadManifold &m, const Vector &s);

// X-norm reconstruction errors of the columns of S_test.
ProjectionErrors quad_errors(const QuadManifold &m, const SnapshotMatrix &S_test, bool relative = false);

}  // namespace morkit

#endif  // MORKIT_NONLINEAR_QUADRATIC_MANIFOLD_HPP
