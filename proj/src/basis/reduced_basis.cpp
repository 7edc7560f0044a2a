// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/basis/reduced_basis.hpp"

#include <cmath>

#include "morkit/error.hpp"

namespace morkit
{

const char *to_string(Construction c)
{
  switch (c)
  {
  case Construction::Pod:
    return "pod";
  case Construction::Greedy:
    return "greedy";
  case Construction::Gss:
    return "gss";
  }
  return "unknown";
}

ReducedBasis pod(const SnapshotMatrix &S, const InnerProduct &metric, Index N, bool centered)
{
  if (N < 1)
    throw PreconditionViolation("POD dimension must be positive");
  const SnapshotMatrix data = centered && !S.centered_mean ? center(S) : S;
  const WeightedSvd svd = weighted_svd(data.columns, metric);
  const Index rank = numerical_rank(svd.singular_values, data.columns.rows(), data.columns.cols());
  if (N > rank)
    throw RankDeficient("requested POD dimension " + std::to_string(N) + " exceeds the snapshot rank",
                        rank);
  ReducedBasis rb(svd.modes.leading(N), Construction::Pod);
  rb.singular_values = svd.singular_values;
  return rb;
}

namespace
{

void check_shapes(const SnapshotMatrix &S, const SubspaceBasis &V)
{
  if (S.dofs() != V.ambient_dim())
    throw DimensionMismatch("snapshot rows differ from basis ambient dimension");
}

ProjectionErrors summarize(Vector e)
{
  ProjectionErrors out;
  out.mean = e.size() ? e.mean() : 0.0;
  out.max = e.size() ? e.maxCoeff() : 0.0;
  out.errors = std::move(e);
  return out;
}

}  // namespace

ProjectionErrors projection_error(const SnapshotMatrix &S_test, const SubspaceBasis &V, bool relative)
{
  check_shapes(S_test, V);
  const InnerProduct &m = V.metric();
  Matrix Y = m.to_euclidean(S_test.columns);
  const Vector norms = Y.colwise().norm();
  if (V.size() > 0)
  {
    const Matrix Q = m.to_euclidean(V.columns());
    Y -= Q * (Q.transpose() * Y);
  }
  Vector e = Y.colwise().norm();
  if (relative)
    for (Index j = 0; j < e.size(); ++j)
      e(j) = norms(j) > 0.0 ? e(j) / norms(j) : 0.0;
  return summarize(std::move(e));
}

Matrix projection_error_curve(const SnapshotMatrix &S_test, const SubspaceBasis &V, bool relative)
{
  check_shapes(S_test, V);
  const InnerProduct &m = V.metric();
  Matrix Y = m.to_euclidean(S_test.columns);
  const Vector norms = Y.colwise().norm();
  const Matrix Q = m.to_euclidean(V.columns());
  Matrix out(V.size(), S_test.size());
  for (Index k = 0; k < V.size(); ++k)
  {
    const auto q = Q.col(k);
    const Eigen::RowVectorXd c = q.transpose() * Y;
    Y.noalias() -= q * c;
    out.row(k) = Y.colwise().norm();
  }
  if (relative)
    for (Index j = 0; j < out.cols(); ++j)
      if (norms(j) > 0.0)
        out.col(j) /= norms(j);
  return out;
}

}  // namespace morkit
