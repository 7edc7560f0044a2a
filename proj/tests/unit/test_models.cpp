// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <Eigen/IterativeLinearSolvers>
#include <cmath>

#include "morkit/error.hpp"
#include "morkit/models/thermal_fin.hpp"
#include "morkit/models/toy_quadratic.hpp"
#include "morkit/numerics/random.hpp"

using namespace morkit;

namespace
{

double mnorm(const HighFidelityModel &m, const Vector &v) { return m.metric().norm(v); }

}  // namespace

TEST_CASE("thermal fin: affine term count and reference metric")
{
  const HighFidelityModel m = build_thermal_fin(4, 8, thermal_fin_reference(5));
  CHECK(m.num_terms() == 6);
  CHECK(m.num_parameters() == 5);
  CHECK(m.terms().front().parameter == -1);
  CHECK(m.terms().back().parameter == 4);
  const SparseMatrix diff = m.operator_at(m.reference()) - m.metric().matrix();
  CHECK(Matrix(diff).cwiseAbs().maxCoeff() == 0.0);
  CHECK(m.mesh().has_value());
}

TEST_CASE("thermal fin: zero Biot number leaves a singular Neumann problem")
{
  const HighFidelityModel m = build_thermal_fin(4, 8, thermal_fin_reference(5));
  Vector mu = Vector::Ones(5);
  mu(4) = 0.0;
  CHECK_THROWS_AS(solve_high_fidelity(m, mu), SolveFailure);
}

TEST_CASE("thermal fin: mesh too coarse for a thin subfin")
{
  FinGeometry g;
  g.fin_thickness = 0.2;
  CHECK_THROWS_AS(build_thermal_fin(g, 2, 1), MeshTooCoarse);
  CHECK_THROWS_AS(build_thermal_fin(FinGeometry{}, 1, 1), MeshTooCoarse);
}

TEST_CASE("thermal fin: energy converges monotonically under nested refinement")
{
  const ParameterVector mu = (Vector(3) << 2.0, 0.5, 0.3).finished();
  double prev = 0.0;
  std::vector<double> energy;
  for (int d : {4, 8, 16, 32})
  {
    const HighFidelityModel m = build_thermal_fin(FinGeometry{}, d, 3);
    const Vector u = solve_high_fidelity(m, mu);
    // Compliance f(u) = a(u, u): the Galerkin energy grows with the nested spaces.
    const double e = m.rhs().dot(u);
    energy.push_back(e);
    CHECK(e > prev);
    prev = e;
  }
  const double d1 = energy[1] - energy[0], d2 = energy[2] - energy[1], d3 = energy[3] - energy[2];
  CHECK(d2 < d1);
  CHECK(d3 < d2);
}

TEST_CASE("thermal fin: solve residual, linearity and CG oracle")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 10, 6);
  const ParameterVector mu = m.reference();
  HighFidelitySolver s(m);
  s.factorize(mu);
  const Vector u = s.state();
  const SparseMatrix A = m.operator_at(mu);
  CHECK((A * u - m.rhs()).norm() <= 1e-10 * m.rhs().norm());

  const Vector u2 = s.solve(2.0 * m.rhs());
  CHECK((u2 - 2.0 * u).norm() <= 1e-13 * u.norm());

  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper> cg;
  cg.setTolerance(1e-13);
  cg.setMaxIterations(20000);
  cg.compute(A);
  const Vector ucg = cg.solve(m.rhs());
  CHECK((ucg - u).norm() <= 1e-8 * u.norm());
}

TEST_CASE("thermal fin: affine assembly equals direct assembly")
{
  FinGeometry g;
  const int density = 6;
  const HighFidelityModel m = build_thermal_fin(g, density, 6);
  Rng rng(101);
  for (int k = 0; k < 5; ++k)
  {
    const Vector mu = uniform_box(rng, m.domain().lower(), m.domain().upper(), 1).col(0);
    const Matrix Aff = m.operator_at(mu);
    const Matrix Dir = assemble_thermal_fin_direct(g, density, mu);
    CHECK((Aff - Dir).cwiseAbs().maxCoeff() <= 1e-12 * Dir.cwiseAbs().maxCoeff());
  }
}

TEST_CASE("thermal fin: operator SPD on a Latin hypercube of the domain")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 4, 6);
  Rng rng(7);
  const Matrix X = latin_hypercube(rng, m.domain().lower(), m.domain().upper(), 100);
  HighFidelitySolver s(m);
  int ok = 0;
  for (Index j = 0; j < X.cols(); ++j)
  {
    s.factorize(X.col(j));
    ++ok;
  }
  CHECK(ok == 100);
}

TEST_CASE("sensitivity: inert parameter gives zero")
{
  // Six parameters on a four-subfin fin: the fifth conductivity touches no region.
  FinGeometry g;
  g.subfins = 4;
  const HighFidelityModel m = build_thermal_fin(g, 6, 6);
  const ParameterVector mu = m.reference();
  const Vector u = solve_high_fidelity(m, mu);
  CHECK(solve_sensitivity(m, mu, 4, u).norm() == 0.0);
}

TEST_CASE("sensitivity: Biot-only fin right-hand side is -A_boundary u")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 6, 1);
  const ParameterVector mu = (Vector(1) << 0.3).finished();
  HighFidelitySolver s(m);
  s.factorize(mu);
  const Vector u = s.state();
  const Vector du = s.sensitivity(0, u);
  const SparseMatrix A = m.operator_at(mu);
  const Vector expect = -(m.blocks().back() * u);
  CHECK((A * du - expect).norm() <= 1e-10 * expect.norm());
}

TEST_CASE("sensitivity: central differences agree, second order in h")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 8, 3);
  const ParameterVector mu = (Vector(3) << 2.0, 0.7, 0.4).finished();
  HighFidelitySolver s(m);
  s.factorize(mu);
  const Vector u = s.state();
  for (Index i = 0; i < 3; ++i)
  {
    const Vector du = s.sensitivity(i, u);
    const double scale = std::abs(mu(i));
    const double h = 1e-5 * scale;
    Vector mp = mu, mm = mu;
    mp(i) += h;
    mm(i) -= h;
    const Vector fd = (solve_high_fidelity(m, mp) - solve_high_fidelity(m, mm)) / (2 * h);
    CHECK(mnorm(m, fd - du) <= 1e-5 * mnorm(m, du));
  }

  // Observed order of the central difference error for the Biot direction.
  const Vector du = s.sensitivity(2, u);
  std::vector<double> lh, le;
  for (double h : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4})
  {
    const double hh = h * mu(2);
    Vector mp = mu, mm = mu;
    mp(2) += hh;
    mm(2) -= hh;
    const Vector fd = (solve_high_fidelity(m, mp) - solve_high_fidelity(m, mm)) / (2 * hh);
    lh.push_back(std::log(hh));
    le.push_back(std::log(mnorm(m, fd - du)));
  }
  const double n = static_cast<double>(lh.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t k = 0; k < lh.size(); ++k)
  {
    sx += lh[k];
    sy += le[k];
    sxx += lh[k] * lh[k];
    sxy += lh[k] * le[k];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(slope == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("second sensitivity: symmetry, diagonal formula, finite differences")
{
  const HighFidelityModel m = build_thermal_fin(FinGeometry{}, 8, 3);
  const ParameterVector mu = (Vector(3) << 1.5, 0.8, 0.2).finished();
  HighFidelitySolver s(m);
  s.factorize(mu);
  const Vector u = s.state();
  std::vector<Vector> du;
  for (Index i = 0; i < 3; ++i)
    du.push_back(s.sensitivity(i, u));

  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j)
    {
      const Vector a = s.second_sensitivity(i, j, du[i], du[j]);
      const Vector b = s.second_sensitivity(j, i, du[j], du[i]);
      CHECK((a - b).norm() <= 1e-12 * std::max(1.0, a.norm()));
    }

  // Diagonal: A d2u = -2 A_block du_i for the block owned by parameter 0 (subfin 1).
  const Vector d00 = s.second_sensitivity(0, 0, du[0], du[0]);
  const Vector expect = -2.0 * (m.blocks()[1] * du[0]);
  CHECK((m.operator_at(mu) * d00 - expect).norm() <= 1e-10 * expect.norm());

  for (Index i = 0; i < 3; ++i)
    for (Index j = i; j < 3; ++j)
    {
      const Vector exact = s.second_sensitivity(i, j, du[i], du[j]);
      const double hi = 1e-3 * mu(i), hj = 1e-3 * mu(j);
      auto at = [&](double si, double sj) {
        Vector x = mu;
        x(i) += si * hi;
        x(j) += sj * hj;
        return solve_high_fidelity(m, x);
      };
      const Vector fd = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4 * hi * hj);
      CHECK(mnorm(m, fd - exact) <= 1e-3 * mnorm(m, exact));
    }
}

TEST_CASE("toy quadratic: constraints and singular structure")
{
  const ToyQuadratic t = build_toy_quadratic(41, 1.0, 2.0, 1.0, 1);
  const auto &c = t.config;
  const Index M = c.M;
  for (Index i = 0; i < M; ++i)
    CHECK(t.mu(i) == -t.mu(M - 1 - i));
  const Vector a = c.alpha * t.mu;
  const Vector b = (c.beta + c.gamma * t.mu.array().square()).matrix();
  CHECK(std::abs(a.squaredNorm() / M - 1.0) < 1e-12);
  CHECK(std::abs(b.squaredNorm() / M - 1.0) < 1e-12);
  CHECK(std::abs(a.dot(b) / M) < 1e-12);
  CHECK(std::abs(b.sum()) < 1e-12);
  CHECK(t.snapshots.rowwise().mean().norm() < 1e-12);

  Eigen::JacobiSVD<Matrix> svd(t.snapshots, Eigen::ComputeThinU);
  CHECK(svd.singularValues()(0) == doctest::Approx(2.0 * std::sqrt(41.0)).epsilon(1e-12));
  CHECK(svd.singularValues()(1) == doctest::Approx(std::sqrt(41.0)).epsilon(1e-12));
  CHECK(std::abs(std::abs(svd.matrixU()(0, 0)) - 1.0) < 1e-12);
  CHECK(std::abs(std::abs(svd.matrixU()(1, 1)) - 1.0) < 1e-12);

  const ToyQuadratic neg = build_toy_quadratic(41, 1.0, 2.0, 1.0, -1);
  CHECK(neg.config.beta == doctest::Approx(-c.beta));
}

TEST_CASE("toy quadratic: precondition and feasibility errors")
{
  CHECK_THROWS_AS(build_toy_quadratic(2, 1.0, 2.0, 1.0), PreconditionViolation);
  CHECK_THROWS_AS(build_toy_quadratic(11, 1.0, 1.0, 2.0), PreconditionViolation);
  // M = 4 has two distinct magnitudes, which is enough for a real beta.
  CHECK_NOTHROW(build_toy_quadratic(4, 1.0, 2.0, 1.0));
}
