// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/numerics/inner_product.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

#include "morkit/error.hpp"

namespace morkit
{

struct InnerProduct::Impl
{
  SparseMatrix M;
  SparseMatrix R;  // upper triangular, M = R^T R
  Eigen::SimplicialLLT<SparseMatrix, Eigen::Lower, Eigen::NaturalOrdering<int>> llt;
};

namespace
{

double max_abs(const SparseMatrix &A)
{
  double m = 0.0;
  for (int k = 0; k < A.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(A, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace

InnerProduct::InnerProduct(const SparseMatrix &M)
{
  if (M.rows() != M.cols() || M.rows() == 0)
    throw DimensionMismatch("inner product matrix must be square and non-empty");

  const double scale = max_abs(M);
  SparseMatrix asym = SparseMatrix(M.transpose()) - M;
  if (max_abs(asym) > 1e-12 * scale)
    throw NotSPD("matrix is not symmetric");

  auto impl = std::make_shared<Impl>();
  impl->M = M;
  impl->M.makeCompressed();
  impl->llt.compute(impl->M);
  if (impl->llt.info() != Eigen::Success)
    throw NotSPD("Cholesky factorization encountered a non-positive pivot");
  impl->R = SparseMatrix(impl->llt.matrixL()).transpose();
  impl->R.makeCompressed();
  impl_ = std::move(impl);
}

InnerProduct InnerProduct::identity(Index n)
{
  SparseMatrix I(n, n);
  I.setIdentity();
  return InnerProduct(I);
}

Index InnerProduct::dim() const { return impl_->M.rows(); }

const SparseMatrix &InnerProduct::matrix() const { return impl_->M; }

Vector InnerProduct::apply(const Vector &x) const
{
  if (x.size() != dim())
    throw DimensionMismatch("vector length does not match metric dimension");
  return impl_->M * x;
}

Matrix InnerProduct::apply(const Matrix &X) const
{
  if (X.rows() != dim())
    throw DimensionMismatch("matrix rows do not match metric dimension");
  return impl_->M * X;
}

double InnerProduct::dot(const Vector &a, const Vector &b) const { return a.dot(apply(b)); }

double InnerProduct::norm(const Vector &a) const { return std::sqrt(std::max(0.0, dot(a, a))); }

Matrix InnerProduct::gram(const Matrix &A, const Matrix &B) const
{
  if (A.rows() != dim())
    throw DimensionMismatch("matrix rows do not match metric dimension");
  return A.transpose() * apply(B);
}

Matrix InnerProduct::to_euclidean(const Matrix &X) const
{
  if (X.rows() != dim())
    throw DimensionMismatch("matrix rows do not match metric dimension");
  return impl_->R * X;
}

Matrix InnerProduct::from_euclidean(const Matrix &Y) const
{
  if (Y.rows() != dim())
    throw DimensionMismatch("matrix rows do not match metric dimension");
  return impl_->R.triangularView<Eigen::Upper>().solve(Y);
}

Matrix InnerProduct::solve(const Matrix &B) const
{
  if (B.rows() != dim())
    throw DimensionMismatch("matrix rows do not match metric dimension");
  return impl_->llt.solve(B);
}

Matrix InnerProduct::riesz_euclidean(const Matrix &B) const
{
  if (B.rows() != dim())
    throw DimensionMismatch("matrix rows do not match metric dimension");
  return impl_->R.transpose().triangularView<Eigen::Lower>().solve(B);
}

SparseMatrix InnerProduct::upper_factor() const { return impl_->R; }

double InnerProduct::factorization_residual() const
{
  const Matrix R = Matrix(impl_->R);
  const Matrix M = Matrix(impl_->M);
  return (R.transpose() * R - M).norm() / M.norm();
}

InnerProduct cholesky_spd(const SparseMatrix &M) { return InnerProduct(M); }

InnerProduct cholesky_spd(const Matrix &M) { return InnerProduct(M.sparseView(0.0, 0.0)); }

}  // namespace morkit
