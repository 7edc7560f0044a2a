// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/manifold/chart.hpp"

#include <cmath>

#include "morkit/basis/snapshots.hpp"
#include "morkit/error.hpp"
#include "morkit/nonlinear/features.hpp"
#include "morkit/numerics/random.hpp"

namespace morkit
{

namespace
{

Index rank_rel(const Matrix &A, double tol)
{
  if (A.size() == 0)
    return 0;
  Eigen::JacobiSVD<Matrix> svd(A);
  const Vector &s = svd.singularValues();
  if (s(0) == 0.0)
    return 0;
  Index r = 0;
  for (Index k = 0; k < s.size(); ++k)
    if (s(k) > tol * s(0))
      ++r;
  return r;
}

Vector ball_point(Rng &rng, Index q)
{
  Vector g(q);
  for (Index i = 0; i < q; ++i)
    g(i) = rng.normal();
  const double nrm = g.norm();
  if (nrm == 0.0)
    return Vector::Zero(q);
  const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(q));
  return g * (radius / nrm);
}

template <typename Fill>
Matrix sample_until_rich(Index q, Index M, std::uint64_t seed, Fill fill)
{
  if (q < 1)
    throw PreconditionViolation("local dimension must be positive");
  const Index m = q * (q + 1) / 2;
  if (M < m + q)
    throw PreconditionViolation("need at least " + std::to_string(m + q) + " directions for q = " +
                                std::to_string(q));
  Rng rng(seed);
  for (int attempt = 0; attempt < 100; ++attempt)
  {
    Matrix P(q, M);
    fill(rng, P);
    const DirectionRanks r = direction_ranks(P);
    if (r.linear == q && r.quadratic == m)
      return P;
  }
  throw SamplingDegenerate("no quadratically rich sample after 100 attempts");
}

}  // namespace

Matrix quadratic_directions(const Matrix &P)
{
  const FeatureMap map = FeatureMap::homogeneous(P.rows());
  return map.eval_columns(P);
}

DirectionRanks direction_ranks(const Matrix &P)
{
  return DirectionRanks{rank_rel(P, 1e-10), rank_rel(quadratic_directions(P), 1e-10)};
}

Matrix sample_directions(Index q, Index M, std::uint64_t seed)
{
  return sample_until_rich(q, M, seed, [q](Rng &rng, Matrix &P) {
    for (Index j = 0; j < P.cols(); ++j)
      P.col(j) = ball_point(rng, q);
  });
}

Matrix sample_symmetric_directions(Index q, Index M, std::uint64_t seed)
{
  if (M % 2 != 0)
    throw PreconditionViolation("symmetric sampling needs an even number of directions");
  return sample_until_rich(q, M, seed, [q](Rng &rng, Matrix &P) {
    for (Index j = 0; j < P.cols(); j += 2)
    {
      P.col(j) = ball_point(rng, q);
      P.col(j + 1) = -P.col(j);
    }
  });
}

LocalChart::LocalChart(const HighFidelityModel &model, ParameterVector mu_star, Matrix embedding,
                       Matrix directions)
  : model_(&model), mu_star_(std::move(mu_star)), E_(std::move(embedding)), P_(std::move(directions))
{
  const Index p = model.num_parameters();
  if (mu_star_.size() != p || E_.rows() != p)
    throw DimensionMismatch("chart center or embedding does not match the parameter count");
  if (P_.rows() != E_.cols())
    throw DimensionMismatch("direction rows differ from the chart dimension");
  if (!model.domain().contains(mu_star_))
    throw DomainViolation("chart center lies outside the parameter domain", {0});
  for (Index j = 0; j < P_.cols(); ++j)
    if (P_.col(j).norm() > 1.0 + 1e-12)
      throw PreconditionViolation("direction " + std::to_string(j) + " lies outside the unit ball");

  HighFidelitySolver solver(model);
  solver.factorize(mu_star_);
  u_star_ = solver.state();

  // Parameter-space derivatives, then the chain rule through E.
  std::vector<Vector> du(static_cast<std::size_t>(p));
  Matrix Dmu(model.dofs(), p);
  for (Index a = 0; a < p; ++a)
  {
    du[static_cast<std::size_t>(a)] = solver.sensitivity(a, u_star_);
    Dmu.col(a) = du[static_cast<std::size_t>(a)];
  }
  J_ = Dmu * E_;

  Matrix D2(model.dofs(), p * p);
  for (Index a = 0; a < p; ++a)
    for (Index b = a; b < p; ++b)
    {
      const Vector d2 = solver.second_sensitivity(a, b, du[static_cast<std::size_t>(a)],
                                                  du[static_cast<std::size_t>(b)]);
      D2.col(a * p + b) = d2;
      D2.col(b * p + a) = d2;
    }

  const Index qd = q();
  Q_.resize(model.dofs(), m());
  Index k = 0;
  for (Index j = 0; j < qd; ++j)
    for (Index l = j; l < qd; ++l, ++k)
    {
      Vector c = Vector::Zero(model.dofs());
      for (Index a = 0; a < p; ++a)
        for (Index b = 0; b < p; ++b)
        {
          const double w = E_(a, j) * E_(b, l);
          if (w != 0.0)
            c.noalias() += w * D2.col(a * p + b);
        }
      Q_.col(k) = (j == l ? 1.0 : 2.0) * c;
    }
}

LocalChart LocalChart::centered(const HighFidelityModel &model, Matrix directions)
{
  const ParameterDomain &d = model.domain();
  return LocalChart(model, d.center(), d.half_widths().asDiagonal(), std::move(directions));
}

Matrix LocalChart::jacobian_at(const Vector &nu) const
{
  if (nu.size() != q())
    throw DimensionMismatch("chart argument has the wrong length");
  HighFidelitySolver solver(*model_);
  solver.factorize(parameter(nu));
  const Vector u = solver.state();
  Matrix Dmu(model_->dofs(), model_->num_parameters());
  for (Index a = 0; a < Dmu.cols(); ++a)
    Dmu.col(a) = solver.sensitivity(a, u);
  return Dmu * E_;
}

Matrix scaled_snapshots(const LocalChart &chart, double r, const Matrix &directions)
{
  if (!(r >= 0.0))
    throw PreconditionViolation("radius must be non-negative");
  if (directions.rows() != chart.q())
    throw DimensionMismatch("direction rows differ from the chart dimension");
  std::vector<ParameterVector> params;
  std::vector<std::size_t> bad;
  for (Index j = 0; j < directions.cols(); ++j)
  {
    params.push_back(chart.parameter(r * directions.col(j)));
    if (!chart.model().domain().contains(params.back()))
      bad.push_back(static_cast<std::size_t>(j));
  }
  if (!bad.empty())
    throw DomainViolation(std::to_string(bad.size()) + " scaled samples leave the parameter domain at r = " +
                              std::to_string(r),
                          bad);
  SnapshotMatrix S = build_snapshots(chart.model(), params);
  S.columns.colwise() -= chart.u_star();
  return std::move(S.columns);
}

Matrix scaled_snapshots(const LocalChart &chart, double r)
{
  return scaled_snapshots(chart, r, chart.directions());
}

SubspaceBasis tangent_reference(const LocalChart &chart)
{
  const Index q = chart.q();
  const InnerProduct &metric = chart.model().metric();
  const Index jr = numerical_rank(weighted_svd(chart.jacobian(), metric).singular_values,
                                  chart.jacobian().rows(), q);
  if (jr < q)
    throw RankDeficient("solution Jacobian at the chart center is singular", jr);
  const WeightedSvd svd = weighted_svd(chart.jacobian() * chart.directions(), metric);
  return svd.modes.leading(q);
}

CurvatureReference curvature_reference(const LocalChart &chart, bool allow_deficient)
{
  const SubspaceBasis U1 = tangent_reference(chart);
  const Matrix Q0 = chart.second_derivatives() * quadratic_directions(chart.directions());
  const Matrix filtered = Q0 - U1.project(Q0);
  const WeightedSvd svd = weighted_svd(filtered, chart.model().metric());
  const Index m = chart.m();
  // Rank relative to the unfiltered block, so a vanishing complement is detected.
  const double scale = weighted_svd(Q0, chart.model().metric()).singular_values(0);
  Index rank = 0;
  for (Index k = 0; k < svd.singular_values.size() && k < m; ++k)
    if (svd.singular_values(k) > 1e-10 * scale)
      ++rank;
  if (rank < m && !allow_deficient)
    throw RankDeficient("filtered second-derivative block has rank below q(q+1)/2", rank);
  if (rank == 0)
    throw RankDeficient("filtered second-derivative block vanishes", 0);
  return CurvatureReference{svd.modes.leading(rank), rank, m};
}

}  // namespace morkit
