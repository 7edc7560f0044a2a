// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/numerics/subspace.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "morkit/error.hpp"

namespace morkit
{
namespace
{

// Euclidean orthonormal basis of R * span(X).
Matrix euclidean_frame(const Matrix &X, const InnerProduct &metric)
{
  const Matrix Y = metric.to_euclidean(X);
  Eigen::ColPivHouseholderQR<Matrix> qr(Y);
  qr.setThreshold(1e-13);
  if (qr.rank() < X.cols())
    throw RankDeficient("basis columns are linearly dependent", qr.rank());
  Eigen::HouseholderQR<Matrix> hqr(Y);
  return hqr.householderQ() * Matrix::Identity(Y.rows(), Y.cols());
}

}  // namespace

PrincipalAngles principal_angles(const SubspaceBasis &U, const SubspaceBasis &W)
{
  if (U.size() != W.size())
    throw DimensionMismatch("principal angles need equal subspace dimensions");
  if (U.ambient_dim() != W.ambient_dim())
    throw DimensionMismatch("principal angles need equal ambient dimensions");
  const Index p = U.size();
  PrincipalAngles out;
  if (p == 0)
  {
    out.angles = out.cosines = out.sines = Vector(0);
    return out;
  }

  const InnerProduct &metric = U.metric();
  const Matrix Qu = euclidean_frame(U.columns(), metric);
  const Matrix Qw = euclidean_frame(W.columns(), metric);

  const Matrix C = Qu.transpose() * Qw;
  Eigen::JacobiSVD<Matrix> cs(C);
  Vector cosines = cs.singularValues().cwiseMin(1.0).cwiseMax(0.0);

  // Component of Qw outside span(Qu); its singular values are the sines.
  const Matrix D = Qw - Qu * C;
  Eigen::JacobiSVD<Matrix> ss(D);
  Vector sines = ss.singularValues().cwiseMin(1.0).cwiseMax(0.0);
  std::sort(sines.data(), sines.data() + sines.size());

  Vector angles(p);
  for (Index i = 0; i < p; ++i)
  {
    const double c = cosines(i);
    const double s = sines(i);
    angles(i) = (c * c >= 0.5) ? std::asin(s) : std::acos(c);
  }
  // Keep the cosine report consistent with the reported angles.
  for (Index i = 0; i < p; ++i)
    cosines(i) = std::cos(angles(i));
  out.angles = angles;
  out.cosines = cosines;
  out.sines = angles.array().sin().matrix();
  return out;
}

double subspace_gap(const SubspaceBasis &U, const SubspaceBasis &W)
{
  const PrincipalAngles pa = principal_angles(U, W);
  return pa.sines.size() == 0 ? 0.0 : pa.sines(pa.sines.size() - 1);
}

double sin_theta_frobenius(const SubspaceBasis &U, const SubspaceBasis &W)
{
  return principal_angles(U, W).sines.norm();
}

AlignmentResult procrustes_align(const SubspaceBasis &target, const SubspaceBasis &base)
{
  if (target.size() != base.size() || target.ambient_dim() != base.ambient_dim())
    throw DimensionMismatch("procrustes alignment needs equal shapes");
  const Index k = base.size();
  const InnerProduct &metric = base.metric();
  const Matrix B = metric.gram(base.columns(), target.columns());
  Eigen::JacobiSVD<Matrix> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix O = svd.matrixU() * svd.matrixV().transpose();
  if (k == 0)
    O = Matrix(0, 0);
  const Matrix D = target.columns() - base.columns() * O;
  const double r2 = k == 0 ? 0.0 : metric.gram(D, D).trace();
  return AlignmentResult{std::move(O), std::sqrt(std::max(0.0, r2))};
}

DavisKahanReport davis_kahan_check(const Matrix &A, const Matrix &E, Index p)
{
  if (A.rows() != A.cols() || E.rows() != A.rows() || E.cols() != A.cols())
    throw DimensionMismatch("Davis-Kahan check needs square matrices of equal size");
  const Index n = A.rows();
  if (p < 1 || p >= n)
    throw PreconditionViolation("cluster size must satisfy 1 <= p < n");

  auto leading = [&](const Matrix &X, Vector *evals) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (X + X.transpose()));
    Matrix V(n, p);
    for (Index j = 0; j < p; ++j)
      V.col(j) = eig.eigenvectors().col(n - 1 - j);
    if (evals)
      *evals = eig.eigenvalues().reverse();
    return V;
  };

  Vector lambda;
  const Matrix Ua = leading(A, &lambda);
  const Matrix Ub = leading(A + E, nullptr);
  const InnerProduct I = InnerProduct::identity(n);

  DavisKahanReport r;
  r.delta = lambda(p - 1) - lambda(p);
  Eigen::SelfAdjointEigenSolver<Matrix> ee(0.5 * (E + E.transpose()), Eigen::EigenvaluesOnly);
  r.e_spectral = ee.eigenvalues().cwiseAbs().maxCoeff();
  r.bound = r.delta > 0.0 ? 2.0 * E.norm() / r.delta : INFINITY;
  r.sin_theta_f = sin_theta_frobenius(SubspaceBasis(Ua, I), SubspaceBasis(Ub, I));
  return r;
}

}  // namespace morkit
