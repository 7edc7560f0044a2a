// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NONLINEAR_FEATURES_HPP
#define MORKIT_NONLINEAR_FEATURES_HPP

#include <string>
#include <vector>

#include "morkit/numerics/types.hpp"

namespace morkit
{

// Upper triangle of a symmetric matrix, row by row:
// (a11, a12, ..., a1q, a22, ..., aqq). Throws NotSymmetric beyond 1e-12 relative.
Vector vecsym(const Matrix &A);

enum class FeatureKind
{
  HomogeneousQuadratic,  // vecsym(q q^T)
  FullQuadratic,         // (1, q, vecsym(q q^T))
  Polynomial,            // every monomial of total degree <= d, graded-lex
};

const char *to_string(FeatureKind kind);
FeatureKind feature_kind_from_string(const std::string &name);

class FeatureMap
{
public:
  FeatureMap(FeatureKind kind, Index input_dim, int degree = 2);

  static FeatureMap homogeneous(Index n) { return {FeatureKind::HomogeneousQuadratic, n}; }
  static FeatureMap full(Index n) { return {FeatureKind::FullQuadratic, n}; }
  static FeatureMap polynomial(Index n, int degree) { return {FeatureKind::Polynomial, n, degree}; }

  FeatureKind kind() const { return kind_; }
  Index input_dim() const { return n_; }
  Index output_dim() const { return m_; }
  int degree() const { return degree_; }

  // Same kind and degree on a different number of inputs.
  FeatureMap with_input_dim(Index n) const { return FeatureMap(kind_, n, degree_); }

  Vector eval(const Vector &q) const;
  // Column-wise evaluation: returns output_dim x Q.cols().
  Matrix eval_columns(const Matrix &Q) const;
  // Derivative d Psi / d q, output_dim x input_dim.
  Matrix jacobian(const Vector &q) const;

  // Exponent vectors in output order (polynomial kind only exposes a non-empty list).
  const std::vector<std::vector<int>> &exponents() const { return exponents_; }

private:
  FeatureKind kind_;
  Index n_;
  int degree_;
  Index m_ = 0;
  std::vector<std::vector<int>> exponents_;
};

// Binomial coefficient C(n, k) as an Index; throws PreconditionViolation on overflow.
Index binomial(Index n, Index k);

}  // namespace morkit

#endif  // MORKIT_NONLINEAR_FEATURES_HPP
