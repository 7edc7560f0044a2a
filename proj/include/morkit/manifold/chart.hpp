// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_MANIFOLD_CHART_HPP
#define MORKIT_MANIFOLD_CHART_HPP

#include <cstdint>

#include "morkit/models/high_fidelity.hpp"
#include "morkit/numerics/decompositions.hpp"

namespace morkit
{

// Uniform samples in the closed unit ball of R^q (q x M). Resamples until
// rank(P) = q and rank(P2) = q(q+1)/2, where P2 has columns vecsym(nu nu^T), both at a
// relative singular-value tolerance of 1e-10. Throws PreconditionViolation when
// M < q(q+1)/2 + q and SamplingDegenerate after 100 attempts.
Matrix sample_directions(Index q, Index M, std::uint64_t seed);

// Same, but in +/- pairs (nu, -nu), so every odd moment of the sample vanishes.
// M must be even.
Matrix sample_symmetric_directions(Index q, Index M, std::uint64_t seed);

// rank(P) and rank(P2) at relative tolerance 1e-10.
struct DirectionRanks
{
  Index linear = 0;
  Index quadratic = 0;
};
DirectionRanks direction_ranks(const Matrix &P);

// Local parametrization U(nu) = u(mu_star + E nu) around mu_star, where E (p x q) maps
// the unit ball to parameter offsets. First and second derivatives of U at nu = 0 are
// computed by sensitivity solves.
class LocalChart
{
public:
  LocalChart(const HighFidelityModel &model, ParameterVector mu_star, Matrix embedding,
             Matrix directions);

  // Chart at the domain center with E = diag(half widths) and q = p.
  static LocalChart centered(const HighFidelityModel &model, Matrix directions);

  const HighFidelityModel &model() const { return *model_; }
  const ParameterVector &mu_star() const { return mu_star_; }
  const Matrix &embedding() const { return E_; }
  const Matrix &directions() const { return P_; }
  const Vector &u_star() const { return u_star_; }
  Index q() const { return E_.cols(); }
  Index m() const { return q() * (q() + 1) / 2; }
  Index samples() const { return P_.cols(); }

  ParameterVector parameter(const Vector &nu) const { return mu_star_ + E_ * nu; }

  // J_U(0), dofs x q.
  const Matrix &jacobian() const { return J_; }
  // Columns (2 - delta_jl) d^2 U / d nu_j d nu_l in vecsym order, dofs x m.
  const Matrix &second_derivatives() const { return Q_; }

  // J_U at an arbitrary nu (fresh sensitivity solves).
  Matrix jacobian_at(const Vector &nu) const;

private:
  const HighFidelityModel *model_;
  ParameterVector mu_star_;
  Matrix E_;
  Matrix P_;
  Vector u_star_;
  Matrix J_;
  Matrix Q_;
};

// Columns u(mu_star + r E nu_i) - u_star. Throws DomainViolation listing the
// offending sample indices.
Matrix scaled_snapshots(const LocalChart &chart, double r);
// Same for an explicit set of directions.
Matrix scaled_snapshots(const LocalChart &chart, double r, const Matrix &directions);

// Leading q weighted left singular vectors of J_U(0) P. Throws RankDeficient when
// the Jacobian has rank below q.
SubspaceBasis tangent_reference(const LocalChart &chart);

struct CurvatureReference
{
  SubspaceBasis basis;  // observed_rank columns
  Index observed_rank = 0;
  Index m = 0;
};

// Leading weighted left singular vectors of (I - Pi_0) Q_base P2, Pi_0 the M-orthogonal
// projector onto the tangent reference. With allow_deficient = false a rank below m
// throws RankDeficient carrying the observed rank; otherwise the rank-sized block is
// returned.
CurvatureReference curvature_reference(const LocalChart &chart, bool allow_deficient = false);

// Quadratic part of the sample: columns vecsym(nu nu^T).
Matrix quadratic_directions(const Matrix &P);

}  // namespace morkit

#endif  // MORKIT_MANIFOLD_CHART_HPP
