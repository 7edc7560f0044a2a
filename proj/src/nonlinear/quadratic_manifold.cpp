// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/nonlinear/quadratic_manifold.hpp"

#include <limits>

#include "morkit/error.hpp"
#include "morkit/nonlinear/regression.hpp"

namespace morkit
{

namespace
{

struct Prepared
{
  SnapshotMatrix data;
  Vector shift;
  WeightedSvd svd;
  Index rank;
};

Prepared prepare(const SnapshotMatrix &S, const InnerProduct &metric, bool centered)
{
  SnapshotMatrix data = centered && !S.centered_mean ? center(S) : S;
  Vector shift = data.centered_mean ? *data.centered_mean : Vector::Zero(S.dofs());
  WeightedSvd svd = weighted_svd(data.columns, metric);
  const Index rank = numerical_rank(svd.singular_values, data.dofs(), data.size());
  return Prepared{std::move(data), std::move(shift), std::move(svd), rank};
}

QuadManifold finish(const Prepared &p, std::vector<Index> modes, const FeatureMap &map)
{
  const Matrix &Phi = p.svd.modes.columns();
  Matrix Vc(Phi.rows(), static_cast<Index>(modes.size()));
  for (std::size_t k = 0; k < modes.size(); ++k)
    Vc.col(static_cast<Index>(k)) = Phi.col(modes[k]);
  SubspaceBasis V(std::move(Vc), p.svd.modes.metric());

  const Matrix &D = p.data.columns;
  const Matrix Q = V.coefficients(D);
  const Matrix T = D - V.columns() * Q;
  const FeatureMap fm = map.with_input_dim(V.size());
  const Matrix Psi = fm.eval_columns(Q);
  Matrix W = fit_least_squares(Psi, T);
  const double objective = V.metric().to_euclidean(T - W * Psi).squaredNorm();
  return QuadManifold{std::move(V), std::move(W), fm, p.shift, std::move(modes), objective};
}

}  // namespace

double quad_mode_objective(const WeightedSvd &svd, const std::vector<Index> &modes,
                           const FeatureMap &map)
{
  // In SVD coordinates the snapshots are the rows of diag(sigma) Z^T and mode k is the
  // k-th unit vector; the residual lives in the rows that were not selected.
  const Index R = svd.singular_values.size();
  const Matrix C = svd.singular_values.asDiagonal() * svd.right_vectors.transpose();
  std::vector<bool> used(static_cast<std::size_t>(R), false);
  Matrix Q(static_cast<Index>(modes.size()), C.cols());
  for (std::size_t k = 0; k < modes.size(); ++k)
  {
    const Index i = modes[k];
    if (i < 0 || i >= R || used[static_cast<std::size_t>(i)])
      throw PreconditionViolation("mode list has an invalid or repeated index");
    used[static_cast<std::size_t>(i)] = true;
    Q.row(static_cast<Index>(k)) = C.row(i);
  }
  Matrix T(R - static_cast<Index>(modes.size()), C.cols());
  for (Index i = 0, k = 0; i < R; ++i)
    if (!used[static_cast<std::size_t>(i)])
      T.row(k++) = C.row(i);
  if (T.rows() == 0)
    return 0.0;
  const Matrix Psi = map.with_input_dim(Q.rows()).eval_columns(Q);
  const Matrix W = fit_least_squares(Psi, T);
  return (T - W * Psi).squaredNorm();
}

QuadManifold qsvdm_train(const SnapshotMatrix &S, const InnerProduct &metric, Index n,
                         const FeatureMap &map, bool centered)
{
  if (n < 1)
    throw PreconditionViolation("latent dimension must be positive");
  if (map.input_dim() != n)
    throw DimensionMismatch("feature map input dimension differs from n");
  const Prepared p = prepare(S, metric, centered);
  if (n > p.rank)
    throw RankDeficient("latent dimension exceeds the snapshot rank", p.rank);
  std::vector<Index> modes(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k)
    modes[static_cast<std::size_t>(k)] = k;
  return finish(p, std::move(modes), map);
}

QuadManifold qgm_train(const SnapshotMatrix &S, const InnerProduct &metric, Index n, Index r,
                       const FeatureMap &map, bool centered)
{
  if (n < 1 || r < n)
    throw PreconditionViolation("QGM needs 1 <= n <= r");
  const Prepared p = prepare(S, metric, centered);
  if (r > p.rank)
    throw RankDeficient("candidate pool exceeds the snapshot rank", p.rank);

  std::vector<Index> selected;
  std::vector<bool> taken(static_cast<std::size_t>(r), false);
  for (Index step = 0; step < n; ++step)
  {
    double best = std::numeric_limits<double>::infinity();
    Index choice = -1;
    for (Index c = 0; c < r; ++c)
    {
      if (taken[static_cast<std::size_t>(c)])
        continue;
      std::vector<Index> trial = selected;
      trial.push_back(c);
      const double e = quad_mode_objective(p.svd, trial, map);
      if (e < best)
      {
        best = e;
        choice = c;
      }
    }
    taken[static_cast<std::size_t>(choice)] = true;
    selected.push_back(choice);
  }
  return finish(p, std::move(selected), map);
}

Vector quad_encode(const QuadManifold &m, const Vector &s)
{
  if (s.size() != m.V.ambient_dim())
    throw DimensionMismatch("snapshot length differs from manifold ambient dimension");
  return m.V.coefficients(s - m.shift);
}

Vector quad_reconstruct(const QuadManifold &m, const Vector &q)
{
  if (q.size() != m.latent_dim())
    throw DimensionMismatch("latent vector length differs from manifold dimension");
  return m.shift + m.V.columns() * q + m.W * m.feature_map.eval(q);
}

Vector quad_reconstruct_snapshot(const QuadManifold &m, const Vector &s)
{
  return quad_reconstruct(m, quad_encode(m, s));
}

ProjectionErrors quad_errors(const QuadManifold &m, const SnapshotMatrix &S_test, bool relative)
{
  const InnerProduct &metric = m.V.metric();
  const Index M = S_test.size();
  Matrix E(S_test.dofs(), M);
  for (Index j = 0; j < M; ++j)
    E.col(j) = S_test.columns.col(j) - quad_reconstruct_snapshot(m, S_test.columns.col(j));
  Vector e = metric.to_euclidean(E).colwise().norm();
  if (relative)
  {
    const Vector norms = metric.to_euclidean(S_test.columns).colwise().norm();
    for (Index j = 0; j < M; ++j)
      e(j) = norms(j) > 0.0 ? e(j) / norms(j) : 0.0;
  }
  ProjectionErrors out;
  out.mean = M ? e.mean() : 0.0;
  out.max = M ? e.maxCoeff() : 0.0;
  out.errors = std::move(e);
  return out;
}

}  // namespace morkit
