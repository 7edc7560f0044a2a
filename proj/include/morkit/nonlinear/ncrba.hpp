// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NONLINEAR_NCRBA_HPP
#define MORKIT_NONLINEAR_NCRBA_HPP

#include <optional>
#include <string>
#include <vector>

#include "morkit/basis/reduced_basis.hpp"
#include "morkit/nonlinear/regression.hpp"

namespace morkit
{

// Compressive reduced-basis approximation: the first n coefficients are free and the
// remaining N - n are predicted by psi_hat,
//   u = sum_{i<=n} alpha_i phi_i + sum_{j>n} psi_hat_j(alpha_1..alpha_n) phi_j.
struct NcrbaModel
{
  SubspaceBasis basis;  // N modes
  Index n = 0;
  CoefficientRegressor psi_hat;
  Vector heldout_mae;   // mean absolute error per predicted coefficient (empty if no held-out data)

  Index N() const { return basis.size(); }
};

struct RegressorSpec
{
  CoefficientRegressor::Kind kind = CoefficientRegressor::Kind::Polynomial;
  int degree = 2;      // polynomial
  Index neighbors = 1;  // nearest-neighbor
};

// Trains psi_hat on coefficient columns (N x M, at least the first N rows of V^T M S).
// `heldout` (possibly empty) is used for the error report only. Throws
// InsufficientData when a polynomial regressor has fewer samples than features.
NcrbaModel ncrba_train(const Matrix &coefficients, const SubspaceBasis &V, Index n, Index N,
                       const RegressorSpec &spec, const Matrix &heldout = Matrix());

// Same, with coefficients obtained by M-projection of snapshots onto V[:, :N].
NcrbaModel ncrba_train(const SnapshotMatrix &S, const SubspaceBasis &V, Index n, Index N,
                       const RegressorSpec &spec, const SnapshotMatrix *heldout = nullptr);

NcrbaModel ncrba_with_zero_map(const SubspaceBasis &V, Index n, Index N);

// First n coefficients of V^T M s.
Vector ncrba_encode(const NcrbaModel &model, const Vector &s);
// (alpha_low, psi_hat(alpha_low)).
Vector ncrba_decode(const NcrbaModel &model, const Vector &alpha_low);
// V * ncrba_decode(alpha_low).
Vector ncrba_lift(const NcrbaModel &model, const Vector &alpha_low);

// Parameter-independent reduced blocks V^T A_q V and V^T f.
struct ReducedSystem
{
  const HighFidelityModel *model = nullptr;
  std::vector<Matrix> Aq;
  Vector f;

  Matrix operator_at(const ParameterVector &mu) const;
};

ReducedSystem reduce_system(const HighFidelityModel &hf, const SubspaceBasis &V);

enum class StepSchedule
{
  Constant,  // fixed gamma
  Adaptive,  // gamma halved whenever the residual grows
};

struct PicardOptions
{
  StepSchedule schedule = StepSchedule::Adaptive;
  double gamma = 0.0;  // <= 0 selects 1 / lambda_max of the n x n reduced operator
  double tol = 1e-10;  // relative to ||(V^T f)_{1..n}||
  Index max_iter = 20000;
  std::optional<Vector> initial;  // starting alpha_low; n-mode Galerkin solution if unset
};

struct PicardResult
{
  Vector alpha_low;            // iterate with the smallest residual
  std::vector<double> trace;   // residual norm at every iterate, starting value first
  Index iterations = 0;
  double gamma = 0.0;          // final step length
};

// Fixed-point iteration alpha <- alpha - gamma r_n(alpha), by default started from
// the n-mode Galerkin solution, where r_n is the Galerkin
// residual on the first n modes of A(mu) V [alpha; psi_hat(alpha)] - f. Throws Diverged
// when the residual exceeds 10x its running minimum and NoConvergence at max_iter.
PicardResult ncrba_online_solve(const NcrbaModel &model, const ReducedSystem &reduced,
                                const ParameterVector &mu, const PicardOptions &options = {});
PicardResult ncrba_online_solve(const NcrbaModel &model, const HighFidelityModel &hf,
                                const ParameterVector &mu, const PicardOptions &options = {});

// Vanilla Galerkin reduced solution on V (all N coefficients).
Vector galerkin_coefficients(const ReducedSystem &reduced, const ParameterVector &mu);

}  // namespace morkit

#endif  // MORKIT_NONLINEAR_NCRBA_HPP
