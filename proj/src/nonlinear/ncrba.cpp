// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/nonlinear/ncrba.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <limits>

#include "morkit/error.hpp"

namespace morkit
{

namespace
{

void check_dims(const SubspaceBasis &V, Index n, Index N)
{
  if (n < 1 || n > N)
    throw PreconditionViolation("NCRBA needs 1 <= n <= N");
  if (N > V.size())
    throw PreconditionViolation("NCRBA dimension N exceeds the basis size");
}

}  // namespace

NcrbaModel ncrba_with_zero_map(const SubspaceBasis &V, Index n, Index N)
{
  check_dims(V, n, N);
  return NcrbaModel{V.leading(N), n, CoefficientRegressor::zero(n, N - n), Vector()};
}

NcrbaModel ncrba_train(const Matrix &coefficients, const SubspaceBasis &V, Index n, Index N,
                       const RegressorSpec &spec, const Matrix &heldout)
{
  check_dims(V, n, N);
  if (n == N)
    throw PreconditionViolation("NCRBA training needs n < N");
  if (coefficients.rows() < N)
    throw DimensionMismatch("coefficient dataset has fewer than N rows");
  const Matrix X = coefficients.topRows(n);
  const Matrix Y = coefficients.middleRows(n, N - n);

  NcrbaModel model{V.leading(N), n, CoefficientRegressor::zero(n, N - n), Vector()};
  switch (spec.kind)
  {
  case CoefficientRegressor::Kind::Zero:
    break;
  case CoefficientRegressor::Kind::Polynomial:
  {
    const FeatureMap map = FeatureMap::polynomial(n, spec.degree);
    if (X.cols() < map.output_dim())
      throw InsufficientData(std::to_string(X.cols()) + " samples for " +
                             std::to_string(map.output_dim()) + " polynomial features");
    model.psi_hat = CoefficientRegressor::polynomial(fit_regression(map, X, Y));
    break;
  }
  case CoefficientRegressor::Kind::NearestNeighbor:
    if (X.cols() < 1)
      throw InsufficientData("nearest-neighbor regressor needs samples");
    model.psi_hat = CoefficientRegressor::nearest_neighbor(NearestNeighborModel{spec.neighbors, X, Y});
    break;
  }

  if (heldout.cols() > 0)
  {
    if (heldout.rows() < N)
      throw DimensionMismatch("held-out coefficients have fewer than N rows");
    Vector mae = Vector::Zero(N - n);
    for (Index j = 0; j < heldout.cols(); ++j)
      mae += (model.psi_hat.predict(heldout.col(j).head(n)) - heldout.col(j).segment(n, N - n)).cwiseAbs();
    model.heldout_mae = mae / static_cast<double>(heldout.cols());
  }
  return model;
}

NcrbaModel ncrba_train(const SnapshotMatrix &S, const SubspaceBasis &V, Index n, Index N,
                       const RegressorSpec &spec, const SnapshotMatrix *heldout)
{
  check_dims(V, n, N);
  const SubspaceBasis VN = V.leading(N);
  const Matrix C = VN.coefficients(S.columns);
  const Matrix H = heldout ? VN.coefficients(heldout->columns) : Matrix();
  return ncrba_train(C, V, n, N, spec, H);
}

Vector ncrba_encode(const NcrbaModel &model, const Vector &s)
{
  if (s.size() != model.basis.ambient_dim())
    throw DimensionMismatch("snapshot length differs from basis ambient dimension");
  return model.basis.leading(model.n).coefficients(s);
}

Vector ncrba_decode(const NcrbaModel &model, const Vector &alpha_low)
{
  if (alpha_low.size() != model.n)
    throw DimensionMismatch("low coefficient vector has the wrong length");
  Vector a(model.N());
  a.head(model.n) = alpha_low;
  a.tail(model.N() - model.n) = model.psi_hat.predict(alpha_low);
  return a;
}

Vector ncrba_lift(const NcrbaModel &model, const Vector &alpha_low)
{
  return model.basis.columns() * ncrba_decode(model, alpha_low);
}

Matrix ReducedSystem::operator_at(const ParameterVector &mu) const
{
  const Vector t = model->theta(mu);
  Matrix A = Matrix::Zero(f.size(), f.size());
  for (Index q = 0; q < t.size(); ++q)
    A += t(q) * Aq[static_cast<std::size_t>(q)];
  return A;
}

ReducedSystem reduce_system(const HighFidelityModel &hf, const SubspaceBasis &V)
{
  if (V.ambient_dim() != hf.dofs())
    throw DimensionMismatch("basis rows differ from model size");
  ReducedSystem r;
  r.model = &hf;
  const Matrix &Vc = V.columns();
  for (const SparseMatrix &A : hf.blocks())
    r.Aq.push_back(Vc.transpose() * (A * Vc));
  r.f = Vc.transpose() * hf.rhs();
  return r;
}

Vector galerkin_coefficients(const ReducedSystem &reduced, const ParameterVector &mu)
{
  Eigen::LLT<Matrix> llt(reduced.operator_at(mu));
  if (llt.info() != Eigen::Success)
    throw SolveFailure("reduced operator is not positive definite");
  return llt.solve(reduced.f);
}

PicardResult ncrba_online_solve(const NcrbaModel &model, const ReducedSystem &reduced,
                                const ParameterVector &mu, const PicardOptions &options)
{
  const Index n = model.n;
  const Index N = model.N();
  if (reduced.f.size() < N)
    throw DimensionMismatch("reduced system is smaller than the NCRBA basis");
  const Matrix A = reduced.operator_at(mu).topLeftCorner(N, N);
  const Vector f = reduced.f.head(N);
  // Only the first n test functions are used (Galerkin projection onto V_n).
  const Matrix An = A.topRows(n);
  const Vector fn = f.head(n);

  double gamma = options.gamma;
  if (gamma <= 0.0)
  {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A.topLeftCorner(n, n), Eigen::EigenvaluesOnly);
    gamma = 1.0 / es.eigenvalues().maxCoeff();
  }
  const double target = options.tol * std::max(fn.norm(), std::numeric_limits<double>::min());

  auto residual = [&](const Vector &a) -> Vector { return An * ncrba_decode(model, a) - fn; };

  PicardResult res;
  Vector alpha;
  if (options.initial)
  {
    if (options.initial->size() != n)
      throw DimensionMismatch("initial iterate has the wrong length");
    alpha = *options.initial;
  }
  else
  {
    // Galerkin solution on the first n modes alone (psi_hat ignored).
    alpha = A.topLeftCorner(n, n).llt().solve(fn);
  }
  Vector r = residual(alpha);
  double rn = r.norm();
  double best = rn;
  res.alpha_low = alpha;
  res.trace.push_back(rn);

  for (Index it = 0; it < options.max_iter; ++it)
  {
    if (best <= target)
    {
      res.gamma = gamma;
      return res;
    }
    Vector next = alpha - gamma * r;
    Vector rnext = residual(next);
    double rnn = rnext.norm();
    if (options.schedule == StepSchedule::Adaptive)
    {
      // Halve until the step does not increase the residual (bounded number of tries).
      for (int tries = 0; rnn > rn && tries < 60; ++tries)
      {
        gamma *= 0.5;
        next = alpha - gamma * r;
        rnext = residual(next);
        rnn = rnext.norm();
      }
    }
    alpha = std::move(next);
    r = std::move(rnext);
    rn = rnn;
    res.trace.push_back(rn);
    res.iterations = it + 1;
    if (!std::isfinite(rn) || rn > 10.0 * best)
      throw Diverged("residual " + std::to_string(rn) + " exceeds 10x its minimum " + std::to_string(best));
    if (rn < best)
    {
      best = rn;
      res.alpha_low = alpha;
    }
  }
  if (best <= target)
  {
    res.gamma = gamma;
    return res;
  }
  throw NoConvergence("residual " + std::to_string(best) + " above tolerance after " +
                      std::to_string(options.max_iter) + " iterations");
}

PicardResult ncrba_online_solve(const NcrbaModel &model, const HighFidelityModel &hf,
                                const ParameterVector &mu, const PicardOptions &options)
{
  return ncrba_online_solve(model, reduce_system(hf, model.basis), mu, options);
}

}  // namespace morkit
