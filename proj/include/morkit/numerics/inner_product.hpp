// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NUMERICS_INNER_PRODUCT_HPP
#define MORKIT_NUMERICS_INNER_PRODUCT_HPP

#include <memory>

#include "morkit/numerics/types.hpp"

namespace morkit
{

// Weighted inner product (v, w)_X = v^T M w with M symmetric positive definite.
//
// M is kept sparse together with a fill-reducing-free Cholesky factor, so the
// factor R := L^T is upper triangular and satisfies M = R^T R. Every routine that
// needs "Euclidean coordinates" of a vector maps it through R; mapping back uses
// R^{-1}. Copies share the immutable factorization.
class InnerProduct
{
public:
  // Factorizes M. Throws NotSPD when M is not symmetric (1e-12 relative) or a pivot
  // is not positive, DimensionMismatch when M is not square or empty.
  explicit InnerProduct(const SparseMatrix &M);

  static InnerProduct identity(Index n);

  Index dim() const;
  const SparseMatrix &matrix() const;

  Vector apply(const Vector &x) const;
  Matrix apply(const Matrix &X) const;

  double dot(const Vector &a, const Vector &b) const;
  double norm(const Vector &a) const;
  // A^T M B.
  Matrix gram(const Matrix &A, const Matrix &B) const;

  // R X with M = R^T R.
  Matrix to_euclidean(const Matrix &X) const;
  // R^{-1} Y.
  Matrix from_euclidean(const Matrix &Y) const;
  // M^{-1} B.
  Matrix solve(const Matrix &B) const;
  // R^{-T} B: Euclidean coordinates R M^{-1} B of the Riesz representers of the
  // functionals B. Their Euclidean norm is the dual norm of B.
  Matrix riesz_euclidean(const Matrix &B) const;

  // Upper-triangular factor R with M = R^T R.
  SparseMatrix upper_factor() const;

  // Relative Frobenius residual ||R^T R - M||_F / ||M||_F (dense; for checks).
  double factorization_residual() const;

private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

// Factorizes a symmetric positive-definite matrix.
InnerProduct cholesky_spd(const SparseMatrix &M);
InnerProduct cholesky_spd(const Matrix &M);

}  // namespace morkit

#endif  // MORKIT_NUMERICS_INNER_PRODUCT_HPP
