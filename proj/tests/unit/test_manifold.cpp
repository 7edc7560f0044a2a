// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "morkit/error.hpp"
#include "morkit/manifold/experiments.hpp"
#include "morkit/models/thermal_fin.hpp"
#include "morkit/numerics/random.hpp"
#include "morkit/numerics/subspace.hpp"

using namespace morkit;

namespace
{

const HighFidelityModel &fin(Index p)
{
  static const HighFidelityModel m1 = build_thermal_fin(FinGeometry{}, 8, 1);
  static const HighFidelityModel m2 = build_thermal_fin(FinGeometry{}, 8, 2);
  static const HighFidelityModel m3 = build_thermal_fin(FinGeometry{}, 8, 3);
  return p == 1 ? m1 : (p == 2 ? m2 : m3);
}

LocalChart chart(Index p, std::uint64_t seed = 7, bool symmetric = false)
{
  const Index m = p * (p + 1) / 2;
  Index M = 4 * m + p;
  if (symmetric && M % 2)
    ++M;
  Matrix P = symmetric ? sample_symmetric_directions(p, M, seed) : sample_directions(p, M, seed);
  return LocalChart::centered(fin(p), std::move(P));
}

}  // namespace

TEST_CASE("loglog_slope_fit: exact powers, noise and too few points")
{
  const std::vector<double> r = dyadic_radii(1, 10);
  std::vector<double> v1, v3, vn;
  Rng rng(3);
  for (double x : r)
  {
    v1.push_back(x);
    v3.push_back(x * x * x);
    vn.push_back(x * (1.0 + 0.05 * rng.normal()));
  }
  CHECK(std::abs(loglog_slope_fit(r, v1).slope - 1.0) < 1e-12);
  CHECK(loglog_slope_fit(r, v3).slope == doctest::Approx(3.0));
  const double s = loglog_slope_fit(r, vn).slope;
  CHECK(s >= 0.9);
  CHECK(s <= 1.1);
  CHECK_THROWS_AS(loglog_slope_fit(r, v1, 0.3), TooFewPoints);
  CHECK(loglog_slope_fit(r, v1, r[4]).points_used == 5);
}

TEST_CASE("sample_directions: examples, ranks, determinism")
{
  const Matrix P1 = sample_directions(1, 5, 1);
  CHECK(P1.rows() == 1);
  CHECK(P1.cwiseAbs().maxCoeff() <= 1.0);
  CHECK(P1.cwiseAbs().maxCoeff() > 0.0);
  CHECK_THROWS_AS(sample_directions(2, 3, 1), PreconditionViolation);

  const Matrix P3 = sample_directions(3, 30, 11);
  const DirectionRanks r = direction_ranks(P3);
  CHECK(r.linear == 3);
  CHECK(r.quadratic == 6);
  CHECK(P3.colwise().norm().maxCoeff() <= 1.0);
  CHECK(P3 == sample_directions(3, 30, 11));

  const Matrix S = sample_symmetric_directions(1, 6, 2);
  CHECK(std::abs(S.array().cube().sum()) < 1e-15);
  CHECK_THROWS_AS(sample_symmetric_directions(1, 5, 2), PreconditionViolation);
}

TEST_CASE("scaled_snapshots: shape, vanishing radius, linear scaling, domain check")
{
  const LocalChart c = LocalChart::centered(fin(1), sample_directions(1, 8, 5));
  const Matrix S = scaled_snapshots(c, 0.1);
  CHECK(S.rows() == fin(1).dofs());
  CHECK(S.cols() == 8);

  const double un = c.u_star().norm();
  CHECK(scaled_snapshots(c, 1e-12).colwise().norm().maxCoeff() < 1e-9 * un);

  const double a = scaled_snapshots(c, 1e-3).colwise().norm().maxCoeff();
  const double b = scaled_snapshots(c, 1e-4).colwise().norm().maxCoeff();
  CHECK(std::log10(a / b) == doctest::Approx(1.0).epsilon(0.1));

  // A radius of 3 pushes every direction with |nu| > 1/3 outside the box.
  try
  {
    scaled_snapshots(c, 3.0);
    FAIL("expected DomainViolation");
  }
  catch (const DomainViolation &e)
  {
    CHECK(!e.offending().empty());
  }
}

TEST_CASE("tangent_reference: q = 1 sensitivity, span equality, resampling invariance")
{
  const LocalChart c1 = chart(1);
  const SubspaceBasis t1 = tangent_reference(c1);
  const Vector J = c1.jacobian().col(0);
  const InnerProduct &M1 = fin(1).metric();
  CHECK(std::abs(std::abs(M1.dot(t1.columns().col(0), J)) / M1.norm(J) - 1.0) < 1e-12);

  const LocalChart c3 = chart(3);
  const SubspaceBasis t3 = tangent_reference(c3);
  const SubspaceBasis span_j = SubspaceBasis::orthonormalize(c3.jacobian(), fin(3).metric());
  CHECK(principal_angles(t3, span_j).angles.maxCoeff() < 1e-10);
  CHECK(principal_angles(t3, tangent_reference(chart(3, 99))).angles.maxCoeff() < 1e-8);
}

TEST_CASE("curvature_reference: orthogonality and the q = 1 case")
{
  const LocalChart c2 = chart(2);
  const CurvatureReference cr = curvature_reference(c2, true);
  const SubspaceBasis t2 = tangent_reference(c2);
  CHECK(cr.m == 3);
  CHECK(cr.observed_rank >= 1);
  CHECK(fin(2).metric().gram(cr.basis.columns(), t2.columns()).cwiseAbs().maxCoeff() < 1e-10);

  const LocalChart c1 = chart(1);
  const CurvatureReference c = curvature_reference(c1);
  const SubspaceBasis t1 = tangent_reference(c1);
  const Vector d2 = c1.second_derivatives().col(0);
  const Vector filt = d2 - t1.project(d2);
  const InnerProduct &M1 = fin(1).metric();
  CHECK(std::abs(std::abs(M1.dot(c.basis.columns().col(0), filt)) / M1.norm(filt) - 1.0) < 1e-10);
}

TEST_CASE("tangent convergence: first-order slope, symmetric sampling, Davis-Kahan bound")
{
  const auto radii = dyadic_radii(2, 12);
  const ConvergenceSeries s = tangent_convergence_experiment(chart(1), radii);
  CHECK(s.fit.slope >= 0.8);
  CHECK(s.fit.slope <= 1.2);
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(s.values[i] <= s.bounds[i]);

  const ConvergenceSeries sym = tangent_convergence_experiment(chart(1, 7, true), radii);
  CHECK(sym.fit.slope >= 1.8);
  CHECK(sym.fit.slope <= 2.2);
  CHECK_THROWS_AS(tangent_convergence_experiment(chart(1), dyadic_radii(2, 4)), PreconditionViolation);
}

TEST_CASE("curvature convergence: filtered slope and monotone trend")
{
  const auto radii = dyadic_radii(2, 12);
  const ConvergenceSeries f = curvature_convergence_experiment(chart(2), radii, true);
  CHECK(f.fit.slope >= 0.8);
  CHECK(f.fit.slope <= 1.2);
  CHECK(f.values.front() > f.values.back());
  int inversions = 0;
  for (std::size_t i = 1; i < f.values.size(); ++i)
    if (f.values[i] > f.values[i - 1])
      ++inversions;
  CHECK(inversions <= 1);
}

TEST_CASE("quadratic law: third-order residual, and unfiltered data prefer the full map")
{
  const auto radii = dyadic_radii(2, 12);
  const LocalChart c = chart(2);
  const ConvergenceSeries hom = quadratic_law_fit(c, radii);
  CHECK(hom.fit.slope >= 2.5);
  CHECK(hom.fit.slope <= 3.5);

  const ConvergenceSeries full = quadratic_law_fit(c, radii, FeatureKind::FullQuadratic);
  for (std::size_t i = 0; i < radii.size(); ++i)
    CHECK(full.values[i] <= hom.values[i] * (1.0 + 1e-8));

  const ConvergenceSeries uh = quadratic_law_fit(c, radii, FeatureKind::HomogeneousQuadratic, false);
  const ConvergenceSeries uf = quadratic_law_fit(c, radii, FeatureKind::FullQuadratic, false);
  CHECK(uf.values[6] < uh.values[6]);
  CHECK(uf.fit.slope > uh.fit.slope + 0.5);
}

TEST_CASE("coefficient map: zero at the center and second-order linearization error")
{
  const LocalChart c = chart(2);
  const EmpiricalChart ec(c, 0.01);
  CHECK(ec.coefficient_map(Vector::Zero(2)).norm() < 1e-14);

  std::vector<double> scaled;
  for (double r : {0.05, 0.01, 0.002})
  {
    const CoefficientCheck chk = coefficient_map_check(c, r);
    scaled.push_back(chk.scaled);
    CHECK(chk.linear_fit_residual <= chk.max_residual * 1.5);
  }
  CHECK(*std::max_element(scaled.begin(), scaled.end()) < 2.0 * *std::min_element(scaled.begin(), scaled.end()));
}

TEST_CASE("jacobian_condition_check: invertible and injective, degenerate control")
{
  const LocalChart c = chart(2);
  const JacobianReport rep = jacobian_condition_check(c, 0.05, 10, 40, 3);
  CHECK(rep.min_singular_value > 0.0);
  CHECK(rep.injectivity_margin > 0.0);
  CHECK(rep.largest_min_singular_value <= 2.0 * rep.min_singular_value);

  // Two chart coordinates driving the same parameter.
  const auto &m = fin(1);
  Matrix E(1, 2);
  E << m.domain().half_widths()(0), m.domain().half_widths()(0);
  const LocalChart dup(m, m.domain().center(), E, sample_directions(2, 12, 4));
  const JacobianReport bad = jacobian_condition_check(dup, 0.05, 3, 0, 3);
  CHECK(bad.min_singular_value < 1e-8 * bad.largest_min_singular_value + 1e-12);
  CHECK_THROWS_AS(tangent_reference(dup), RankDeficient);
}

TEST_CASE("singular gap grows and the dimension is detected at small radius")
{
  const auto radii = dyadic_radii(2, 12);
  for (Index p : {1, 2, 3})
  {
    const LocalChart c = chart(p);
    const std::vector<double> g = singular_gap_ratios(c, radii);
    CHECK(g.back() >= 10.0 * g.front());
    const Vector sv = weighted_svd(scaled_snapshots(c, radii.back()), fin(p).metric()).singular_values;
    CAPTURE(p);
    CHECK(detect_dimension(sv, 100.0) == p);
  }
}

TEST_CASE("alignment: Procrustes residual decays at first order")
{
  const ConvergenceSeries a = alignment_experiment(chart(2), dyadic_radii(2, 12));
  CHECK(a.fit.slope >= 0.8);
  CHECK(a.fit.slope <= 1.2);
}
