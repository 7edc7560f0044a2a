// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NUMERICS_DECOMPOSITIONS_HPP
#define MORKIT_NUMERICS_DECOMPOSITIONS_HPP

#include "morkit/numerics/inner_product.hpp"
#include "morkit/numerics/types.hpp"

namespace morkit
{

// Columns orthonormal in a given metric. The constructor trusts the caller; use
// orthonormalize() for raw input.
class SubspaceBasis
{
public:
  SubspaceBasis(Matrix columns, InnerProduct metric);

  // Thin M-orthonormal basis of range(raw); throws RankDeficient when raw has
  // dependent columns.
  static SubspaceBasis orthonormalize(const Matrix &raw, const InnerProduct &metric);
  static SubspaceBasis empty(const InnerProduct &metric);

  const Matrix &columns() const { return columns_; }
  const InnerProduct &metric() const { return metric_; }
  Index ambient_dim() const { return columns_.rows(); }
  Index size() const { return columns_.cols(); }

  // First k columns.
  SubspaceBasis leading(Index k) const;

  // ||V^T M V - I||_F.
  double orthonormality_defect() const;

  // Coefficients V^T M x.
  Matrix coefficients(const Matrix &X) const;
  // V V^T M x.
  Matrix project(const Matrix &X) const;

private:
  Matrix columns_;
  InnerProduct metric_;
};

struct WeightedSvd
{
  SubspaceBasis modes;    // Phi = L^{-1} U~, one column per singular value
  Vector singular_values;  // descending
  Matrix right_vectors;   // Z~, orthonormal columns
};

// SVD of the metric-transformed snapshot matrix L S = U~ S~ Z~^T.
WeightedSvd weighted_svd(const Matrix &S, const InnerProduct &metric);

struct CorrelationEig
{
  Vector eigenvalues;    // all M eigenvalues of S^T M S, descending, clamped at 0
  SubspaceBasis modes;  // S v_k / sqrt(lambda_k) for retained eigenvalues
  Index retained = 0;
};

// Eigen-decomposition of the correlation matrix C = S^T M S (method of snapshots).
// Retains lambda_k > max(1e-14 lambda_1, 1e-28).
CorrelationEig correlation_eig(const Matrix &S, const InnerProduct &metric);

// z = u - V V^T M u, normalized in the M-norm. The projection is applied twice to
// keep the result orthogonal to V at working precision. Throws DegenerateVector when
// ||z||_M <= 1e-12 ||u||_M.
Vector gram_schmidt(const Matrix &V, const Vector &u, const InnerProduct &metric);

// Flips each column so that its largest-magnitude entry is positive, and applies the
// same flips to the matching columns of `partner` (if non-empty).
void normalize_signs(Matrix &columns, Matrix *partner = nullptr);

// Number of singular values above max(rows, cols) * eps * sigma_1.
Index numerical_rank(const Vector &singular_values, Index rows, Index cols);

}  // namespace morkit

#endif  // MORKIT_NUMERICS_DECOMPOSITIONS_HPP
