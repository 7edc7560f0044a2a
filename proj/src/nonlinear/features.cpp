// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/nonlinear/features.hpp"

#include <cmath>
#include <limits>

#include "morkit/error.hpp"

namespace morkit
{

Vector vecsym(const Matrix &A)
{
  if (A.rows() != A.cols())
    throw NotSymmetric("vecsym needs a square matrix");
  const Index q = A.rows();
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  Vector out(q * (q + 1) / 2);
  Index k = 0;
  for (Index i = 0; i < q; ++i)
    for (Index j = i; j < q; ++j)
    {
      if (std::abs(A(i, j) - A(j, i)) > 1e-12 * scale)
        throw NotSymmetric("entries (" + std::to_string(i) + "," + std::to_string(j) + ") differ");
      out(k++) = A(i, j);
    }
  return out;
}

const char *to_string(FeatureKind kind)
{
  switch (kind)
  {
  case FeatureKind::HomogeneousQuadratic:
    return "homogeneous_quadratic";
  case FeatureKind::FullQuadratic:
    return "full_quadratic";
  case FeatureKind::Polynomial:
    return "polynomial";
  }
  return "unknown";
}

FeatureKind feature_kind_from_string(const std::string &name)
{
  if (name == "homogeneous_quadratic" || name == "homogeneous")
    return FeatureKind::HomogeneousQuadratic;
  if (name == "full_quadratic" || name == "full")
    return FeatureKind::FullQuadratic;
  if (name == "polynomial")
    return FeatureKind::Polynomial;
  throw ConfigError("unknown feature map '" + name + "'");
}

Index binomial(Index n, Index k)
{
  if (k < 0 || k > n)
    return 0;
  k = std::min(k, n - k);
  Index r = 1;
  for (Index i = 1; i <= k; ++i)
  {
    if (r > std::numeric_limits<Index>::max() / (n - k + i))
      throw PreconditionViolation("binomial coefficient overflows");
    r = r * (n - k + i) / i;
  }
  return r;
}

namespace
{

// All exponent vectors of total degree exactly `total`, with larger powers of
// earlier variables first.
void exponents_of_degree(Index n, int total, std::vector<int> &cur, Index pos,
                         std::vector<std::vector<int>> &out)
{
  if (pos == n - 1)
  {
    cur[static_cast<std::size_t>(pos)] = total;
    out.push_back(cur);
    return;
  }
  for (int e = total; e >= 0; --e)
  {
    cur[static_cast<std::size_t>(pos)] = e;
    exponents_of_degree(n, total - e, cur, pos + 1, out);
  }
}

}  // namespace

FeatureMap::FeatureMap(FeatureKind kind, Index input_dim, int degree)
  : kind_(kind), n_(input_dim), degree_(kind == FeatureKind::Polynomial ? degree : 2)
{
  if (n_ < 1)
    throw PreconditionViolation("feature map needs at least one input");
  switch (kind_)
  {
  case FeatureKind::HomogeneousQuadratic:
    m_ = n_ * (n_ + 1) / 2;
    break;
  case FeatureKind::FullQuadratic:
    m_ = 1 + n_ + n_ * (n_ + 1) / 2;
    break;
  case FeatureKind::Polynomial:
  {
    if (degree_ < 0)
      throw PreconditionViolation("polynomial degree must be non-negative");
    m_ = binomial(n_ + degree_, degree_);
    std::vector<int> cur(static_cast<std::size_t>(n_), 0);
    exponents_.reserve(static_cast<std::size_t>(m_));
    for (int t = 0; t <= degree_; ++t)
      exponents_of_degree(n_, t, cur, 0, exponents_);
    break;
  }
  }
}

Vector FeatureMap::eval(const Vector &q) const
{
  if (q.size() != n_)
    throw DimensionMismatch("feature input has length " + std::to_string(q.size()) + ", expected " +
                            std::to_string(n_));
  Vector out(m_);
  Index k = 0;
  switch (kind_)
  {
  case FeatureKind::FullQuadratic:
    out(k++) = 1.0;
    out.segment(k, n_) = q;
    k += n_;
    [[fallthrough]];
  case FeatureKind::HomogeneousQuadratic:
    for (Index i = 0; i < n_; ++i)
      for (Index j = i; j < n_; ++j)
        out(k++) = q(i) * q(j);
    break;
  case FeatureKind::Polynomial:
    for (const auto &e : exponents_)
    {
      double v = 1.0;
      for (Index i = 0; i < n_; ++i)
        for (int r = 0; r < e[static_cast<std::size_t>(i)]; ++r)
          v *= q(i);
      out(k++) = v;
    }
    break;
  }
  return out;
}

Matrix FeatureMap::eval_columns(const Matrix &Q) const
{
  if (Q.rows() != n_)
    throw DimensionMismatch("feature input rows differ from the map's input dimension");
  Matrix out(m_, Q.cols());
  for (Index j = 0; j < Q.cols(); ++j)
    out.col(j) = eval(Q.col(j));
  return out;
}

Matrix FeatureMap::jacobian(const Vector &q) const
{
  if (q.size() != n_)
    throw DimensionMismatch("feature input length differs from the map's input dimension");
  Matrix J = Matrix::Zero(m_, n_);
  Index k = 0;
  switch (kind_)
  {
  case FeatureKind::FullQuadratic:
    ++k;
    J.block(k, 0, n_, n_).setIdentity();
    k += n_;
    [[fallthrough]];
  case FeatureKind::HomogeneousQuadratic:
    for (Index i = 0; i < n_; ++i)
      for (Index j = i; j < n_; ++j, ++k)
      {
        J(k, i) += q(j);
        J(k, j) += q(i);
      }
    break;
  case FeatureKind::Polynomial:
    for (const auto &e : exponents_)
    {
      for (Index d = 0; d < n_; ++d)
      {
        const int ed = e[static_cast<std::size_t>(d)];
        if (ed == 0)
          continue;
        double v = ed;
        for (Index i = 0; i < n_; ++i)
        {
          const int pw = i == d ? ed - 1 : e[static_cast<std::size_t>(i)];
          for (int r = 0; r < pw; ++r)
            v *= q(i);
        }
        J(k, d) = v;
      }
      ++k;
    }
    break;
  }
  return J;
}

}  // namespace morkit
