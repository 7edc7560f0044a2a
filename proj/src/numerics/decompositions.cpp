// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/numerics/decompositions.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>

#include "morkit/error.hpp"

namespace morkit
{

SubspaceBasis::SubspaceBasis(Matrix columns, InnerProduct metric)
  : columns_(std::move(columns)), metric_(std::move(metric))
{
  if (columns_.rows() != metric_.dim())
    throw DimensionMismatch("basis rows do not match metric dimension");
}

SubspaceBasis SubspaceBasis::orthonormalize(const Matrix &raw, const InnerProduct &metric)
{
  if (raw.rows() != metric.dim())
    throw DimensionMismatch("basis rows do not match metric dimension");
  if (raw.cols() == 0)
    return empty(metric);
  // Thin QR in Euclidean coordinates, mapped back through the factor.
  const Matrix Y = metric.to_euclidean(raw);
  Eigen::ColPivHouseholderQR<Matrix> qr(Y);
  qr.setThreshold(1e-12);
  if (qr.rank() < raw.cols())
    throw RankDeficient("columns are linearly dependent", qr.rank());
  Eigen::HouseholderQR<Matrix> hqr(Y);
  Matrix Q = hqr.householderQ() * Matrix::Identity(Y.rows(), Y.cols());
  // Keep the orientation of the input columns.
  const Matrix Rtri = hqr.matrixQR().topRows(Y.cols()).triangularView<Eigen::Upper>();
  for (Index j = 0; j < Q.cols(); ++j)
    if (Rtri(j, j) < 0.0)
      Q.col(j) = -Q.col(j);
  return SubspaceBasis(metric.from_euclidean(Q), metric);
}

SubspaceBasis SubspaceBasis::empty(const InnerProduct &metric)
{
  return SubspaceBasis(Matrix(metric.dim(), 0), metric);
}

SubspaceBasis SubspaceBasis::leading(Index k) const
{
  if (k < 0 || k > size())
    throw DimensionMismatch("requested more leading columns than available");
  return SubspaceBasis(columns_.leftCols(k), metric_);
}

double SubspaceBasis::orthonormality_defect() const
{
  if (size() == 0)
    return 0.0;
  return (metric_.gram(columns_, columns_) - Matrix::Identity(size(), size())).norm();
}

Matrix SubspaceBasis::coefficients(const Matrix &X) const
{
  return metric_.gram(columns_, X);
}

Matrix SubspaceBasis::project(const Matrix &X) const
{
  if (size() == 0)
    return Matrix::Zero(X.rows(), X.cols());
  return columns_ * coefficients(X);
}

void normalize_signs(Matrix &columns, Matrix *partner)
{
  for (Index j = 0; j < columns.cols(); ++j)
  {
    Index imax = 0;
    columns.col(j).cwiseAbs().maxCoeff(&imax);
    if (columns(imax, j) < 0.0)
    {
      columns.col(j) = -columns.col(j);
      if (partner && partner->cols() > j)
        partner->col(j) = -partner->col(j);
    }
  }
}

Index numerical_rank(const Vector &singular_values, Index rows, Index cols)
{
  if (singular_values.size() == 0 || singular_values(0) <= 0.0)
    return 0;
  const double tol = static_cast<double>(std::max(rows, cols)) *
                     std::numeric_limits<double>::epsilon() * singular_values(0);
  Index r = 0;
  for (Index k = 0; k < singular_values.size(); ++k)
    if (singular_values(k) > tol)
      ++r;
  return r;
}

WeightedSvd weighted_svd(const Matrix &S, const InnerProduct &metric)
{
  if (S.rows() != metric.dim())
    throw DimensionMismatch("snapshot rows do not match metric dimension");
  if (S.cols() == 0)
    throw DimensionMismatch("snapshot matrix is empty");

  const Matrix Y = metric.to_euclidean(S);
  Eigen::BDCSVD<Matrix> svd(Y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Matrix U = svd.matrixU();
  Matrix Z = svd.matrixV();
  Matrix Phi = metric.from_euclidean(U);
  // Sign convention on the physical-space modes; U and Z follow.
  for (Index j = 0; j < Phi.cols(); ++j)
  {
    Index imax = 0;
    Phi.col(j).cwiseAbs().maxCoeff(&imax);
    if (Phi(imax, j) < 0.0)
    {
      Phi.col(j) = -Phi.col(j);
      Z.col(j) = -Z.col(j);
    }
  }
  return WeightedSvd{SubspaceBasis(std::move(Phi), metric), svd.singularValues(), std::move(Z)};
}

CorrelationEig correlation_eig(const Matrix &S, const InnerProduct &metric)
{
  if (S.rows() != metric.dim())
    throw DimensionMismatch("snapshot rows do not match metric dimension");
  if (S.cols() == 0)
    throw DimensionMismatch("snapshot matrix is empty");

  Matrix C = metric.gram(S, S);
  C = 0.5 * (C + C.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(C);
  const Index m = C.rows();

  // Eigen returns ascending order.
  Vector lambda(m);
  Matrix V(m, m);
  for (Index k = 0; k < m; ++k)
  {
    lambda(k) = std::max(0.0, eig.eigenvalues()(m - 1 - k));
    V.col(k) = eig.eigenvectors().col(m - 1 - k);
  }

  const double cut = std::max(1e-14 * lambda(0), 1e-28);
  Index kept = 0;
  while (kept < m && lambda(kept) > cut)
    ++kept;

  Matrix Phi(S.rows(), kept);
  for (Index k = 0; k < kept; ++k)
    Phi.col(k) = S * V.col(k) / std::sqrt(lambda(k));
  normalize_signs(Phi);
  return CorrelationEig{std::move(lambda), SubspaceBasis(std::move(Phi), metric), kept};
}

Vector gram_schmidt(const Matrix &V, const Vector &u, const InnerProduct &metric)
{
  if (u.size() != metric.dim() || (V.cols() > 0 && V.rows() != metric.dim()))
    throw DimensionMismatch("gram_schmidt operands do not match metric dimension");
  const double unorm = metric.norm(u);
  if (unorm == 0.0)
    throw DegenerateVector("input vector is zero");

  Vector z = u;
  if (V.cols() > 0)
  {
    for (int pass = 0; pass < 2; ++pass)
      z -= V * (V.transpose() * metric.apply(z));
  }
  const double znorm = metric.norm(z);
  if (znorm <= 1e-12 * unorm)
    throw DegenerateVector("vector lies in the current span");
  return z / znorm;
}

}  // namespace morkit
