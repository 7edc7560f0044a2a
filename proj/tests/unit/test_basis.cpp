// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>

#include "morkit/basis/greedy.hpp"
#include "morkit/error.hpp"
#include "morkit/models/thermal_fin.hpp"
#include "morkit/models/toy_quadratic.hpp"
#include "morkit/numerics/random.hpp"
#include "morkit/numerics/subspace.hpp"

using namespace morkit;

namespace
{

const HighFidelityModel &fin3()
{
  static const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 6, 3);
  return m;
}

std::vector<ParameterVector> draw(const HighFidelityModel &m, std::uint64_t seed, Index count)
{
  Rng rng(seed);
  return columns_of(uniform_box(rng, m.domain().lower(), m.domain().upper(), count));
}

}  // namespace

TEST_CASE("build_snapshots: shape, provenance and determinism")
{
  const auto &m = fin3();
  const auto one = build_snapshots(m, {m.reference()});
  CHECK(one.columns.rows() == m.dofs());
  CHECK(one.size() == 1);

  const ParameterVector mu = draw(m, 3, 1).front();
  const auto dup = build_snapshots(m, {mu, mu});
  CHECK((dup.columns.col(0).array() == dup.columns.col(1).array()).all());
  CHECK(dup.parameters.size() == 2);
}

TEST_CASE("build_snapshots: correlation spectrum decays on a Latin hypercube")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{5}, 4, 6);
  Rng rng(12);
  const auto params = columns_of(latin_hypercube(rng, m.domain().lower(), m.domain().upper(), 100));
  const auto S = build_snapshots(m, params);
  const CorrelationEig c = correlation_eig(S.columns, m.metric());
  for (Index k = 1; k < c.eigenvalues.size(); ++k)
    CHECK(c.eigenvalues(k) <= c.eigenvalues(k - 1));
  CHECK(c.eigenvalues(20) < 1e-6 * c.eigenvalues(0));
}

TEST_CASE("pod: leading mode of orthogonal columns")
{
  Rng rng(4);
  const InnerProduct metric = cholesky_spd(random_spd(rng, 6, 5.0));
  const SubspaceBasis Q = SubspaceBasis::orthonormalize(rng.normal_matrix(6, 3), metric);
  SnapshotMatrix S;
  S.columns = Q.columns() * Vector((Vector(3) << 2.0, 3.0, 1.0).finished()).asDiagonal();
  const ReducedBasis rb = pod(S, metric, 1);
  const Vector phi = rb.basis.columns().col(0);
  CHECK(std::abs(std::abs(metric.dot(phi, Q.columns().col(1))) - 1.0) < 1e-12);
  CHECK_THROWS_AS(pod(S, metric, 4), RankDeficient);
}

TEST_CASE("pod: centered toy snapshots give the coordinate axes")
{
  const ToyQuadratic t = build_toy_quadratic(21, 1.0, 3.0, 1.0);
  SnapshotMatrix S;
  S.columns = t.snapshots;
  const ReducedBasis rb = pod(S, InnerProduct::identity(2), 2, true);
  const Matrix &V = rb.basis.columns();
  CHECK(std::abs(std::abs(V(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(V(1, 1)) - 1.0) < 1e-12);
}

TEST_CASE("pod: projection error identity on fin snapshots")
{
  const auto &m = fin3();
  const auto S = build_snapshots(m, draw(m, 9, 40));
  const CorrelationEig c = correlation_eig(S.columns, m.metric());
  for (Index N : {1, 3, 6})
  {
    const ReducedBasis rb = pod(S, m.metric(), N);
    const ProjectionErrors e = projection_error(S, rb.basis);
    const double lhs = e.errors.squaredNorm();
    const double rhs = c.eigenvalues.tail(c.eigenvalues.size() - N).sum();
    CHECK(std::abs(lhs - rhs) <= 1e-8 * rhs);
  }
}

TEST_CASE("pod: optimal against random subspaces")
{
  Rng rng(77);
  for (int set = 0; set < 10; ++set)
  {
    const InnerProduct metric = cholesky_spd(random_spd(rng, 15, 10.0));
    SnapshotMatrix S;
    S.columns = rng.normal_matrix(15, 4) * rng.normal_matrix(4, 12) + 0.1 * rng.normal_matrix(15, 12);
    const Index N = 3;
    const double best = projection_error(S, pod(S, metric, N).basis).errors.squaredNorm();
    for (int draw_i = 0; draw_i < 100; ++draw_i)
    {
      const SubspaceBasis R = SubspaceBasis::orthonormalize(rng.normal_matrix(15, N), metric);
      CHECK(projection_error(S, R).errors.squaredNorm() >= best * (1.0 - 1e-12));
    }
  }
}

TEST_CASE("projection_error: trivial cases and curve consistency")
{
  const auto &m = fin3();
  const auto S = build_snapshots(m, draw(m, 21, 12));
  const SubspaceBasis V = SubspaceBasis::orthonormalize(S.columns.leftCols(5), m.metric());

  SnapshotMatrix inside;
  inside.columns = S.columns.leftCols(5);
  CHECK(projection_error(inside, V, true).max < 1e-10);

  const ProjectionErrors none = projection_error(S, SubspaceBasis::empty(m.metric()));
  for (Index j = 0; j < S.size(); ++j)
    CHECK(none.errors(j) == doctest::Approx(m.metric().norm(S.columns.col(j))).epsilon(1e-12));

  const Matrix curve = projection_error_curve(S, V, true);
  for (Index N = 1; N <= 5; ++N)
  {
    const ProjectionErrors direct = projection_error(S, V.leading(N), true);
    CHECK((curve.row(N - 1).transpose() - direct.errors).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("coercivity_lower_bound: reference, min-theta and Rayleigh check")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 3, 3);
  CHECK(coercivity_lower_bound(m, m.reference()) == doctest::Approx(1.0));
  ParameterVector mu = m.reference();
  mu(0) = 0.1;
  CHECK(coercivity_lower_bound(m, mu) == doctest::Approx(0.1));
  mu(0) = 0.0;
  CHECK_THROWS_AS(coercivity_lower_bound(m, mu), NonCoercive);

  const Matrix M = m.metric().matrix();
  for (const auto &x : draw(m, 5, 10))
  {
    const Matrix A = m.operator_at(x);
    Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(A, M, Eigen::EigenvaluesOnly);
    CHECK(ges.eigenvalues().minCoeff() >= coercivity_lower_bound(m, x) * (1.0 - 1e-10));
  }
}

TEST_CASE("estimator: empty basis, brute-force agreement, zero residual")
{
  const auto &m = fin3();
  ErrorEstimator empty(m);
  for (const auto &mu : draw(m, 8, 3))
  {
    const double expect = m.metric().riesz_euclidean(m.rhs()).norm() / coercivity_lower_bound(m, mu);
    CHECK(empty.evaluate(mu).delta == doctest::Approx(expect).epsilon(1e-12));
  }

  const auto S = build_snapshots(m, draw(m, 31, 6));
  const SubspaceBasis V = SubspaceBasis::orthonormalize(S.columns, m.metric());
  const ErrorEstimator est = estimator_offline(m, V);
  Rng rng(2);
  for (const auto &mu : draw(m, 10, 5))
  {
    const Vector alpha = rng.normal_matrix(6, 1);
    const double brute = residual_dual_norm(m, V.columns(), alpha, mu);
    CHECK(std::abs(est.residual_norm(mu, alpha) - brute) <= 1e-8 * brute);
    const auto ev = est.evaluate(mu);
    const double brute_g = residual_dual_norm(m, V.columns(), ev.coefficients, mu);
    CHECK(std::abs(ev.residual_dual_norm - brute_g) <= 1e-8 * brute_g + 1e-14);
  }
  for (const auto &mu : S.parameters)
    CHECK(estimator_eval(est, m, V, mu) < 1e-8 * m.rhs().norm());
}

TEST_CASE("estimator: upper bound and stale-state detection")
{
  const auto &m = fin3();
  const auto S = build_snapshots(m, draw(m, 41, 4));
  const SubspaceBasis V = SubspaceBasis::orthonormalize(S.columns, m.metric());
  const ErrorEstimator est = estimator_offline(m, V);
  const auto test = draw(m, 42, 30);
  const auto T = build_snapshots(m, test);
  const ProjectionErrors e = projection_error(T, V);
  for (std::size_t j = 0; j < test.size(); ++j)
    CHECK(est.evaluate(test[j]).delta >= e.errors(static_cast<Index>(j)));

  Matrix changed = V.columns();
  changed(0, 0) += 1e-9;
  CHECK_THROWS_AS(estimator_eval(est, m, SubspaceBasis(changed, m.metric()), test[0]), StaleState);
  CHECK_THROWS_AS(estimator_eval(est, m, V.leading(3), test[0]), StaleState);
}

TEST_CASE("weak_greedy: single-point set and infinite tolerance")
{
  const auto &m = fin3();
  const auto train = draw(m, 50, 20);
  CHECK(weak_greedy(m, {train[0]}, 0.0, 5).size() == 1);
  const ReducedBasis rb = weak_greedy(m, train, std::numeric_limits<double>::infinity(), 10, 3);
  CHECK(rb.size() == 1);
  CHECK(rb.selected_indices.front() == 3);
}

TEST_CASE("weak_greedy: duplicated parameters stop with a note")
{
  const auto &m = fin3();
  const ParameterVector mu = draw(m, 51, 1).front();
  const ReducedBasis rb = weak_greedy(m, {mu, mu}, 0.0, 2);
  CHECK(rb.size() == 1);
  CHECK(rb.notes.size() == 1);
}

TEST_CASE("weak_greedy: orthonormal basis and distinct selections")
{
  const auto &m = fin3();
  const auto train = draw(m, 60, 150);
  const ReducedBasis rb = weak_greedy(m, train, 1e-12, 15);
  CHECK(rb.size() == 15);
  CHECK(rb.basis.orthonormality_defect() < 1e-10 * std::sqrt(15.0));
  CHECK(rb.construction == Construction::Greedy);
  CHECK(rb.max_estimates.size() == 15);
  std::vector<Index> sel = rb.selected_indices;
  std::sort(sel.begin(), sel.end());
  CHECK(std::adjacent_find(sel.begin(), sel.end()) == sel.end());
}

TEST_CASE("weak_greedy property: max estimate non-increasing across iterations")
{
  const auto &m = fin3();
  const auto train = draw(m, 60, 150);
  const ReducedBasis rb = weak_greedy(m, train, 1e-12, 15);
  for (std::size_t k = 1; k < rb.max_estimates.size(); ++k)
  {
    CAPTURE(k);
    CHECK(rb.max_estimates[k] <= rb.max_estimates[k - 1] * (1.0 + 1e-12));
  }
}

TEST_CASE("gss: same subspace as greedy when M2 = N, M2 = 2N default shape")
{
  const auto &m = fin3();
  const auto train = draw(m, 70, 120);
  const Index N = 8;
  const ReducedBasis g = weak_greedy(m, train, -1.0, N);
  const ReducedBasis s = gss(m, train, N, N);
  CHECK(principal_angles(g.basis, s.basis).angles.maxCoeff() < 1e-8);
  CHECK(s.construction == Construction::Gss);

  const ReducedBasis s2 = gss(m, train, 2 * N, N);
  CHECK(s2.size() == N);
  CHECK(s2.selected_indices.size() == static_cast<std::size_t>(2 * N));
  CHECK(s2.basis.orthonormality_defect() < 1e-10);
  CHECK_THROWS_AS(gss(m, train, N - 1, N), PreconditionViolation);
}
