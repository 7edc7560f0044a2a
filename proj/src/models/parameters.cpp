// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/models/parameters.hpp"

#include "morkit/error.hpp"

namespace morkit
{

ParameterDomain::ParameterDomain(Vector lower, Vector upper)
  : lower_(std::move(lower)), upper_(std::move(upper))
{
  if (lower_.size() != upper_.size())
    throw DimensionMismatch("domain bounds differ in length");
  if (lower_.size() < 1)
    throw PreconditionViolation("parameter domain must have at least one dimension");
  for (Index i = 0; i < lower_.size(); ++i)
    if (!(lower_(i) < upper_(i)))
      throw PreconditionViolation("domain lower bound must be below upper bound in component " +
                                  std::to_string(i));
}

ParameterDomain ParameterDomain::thermal_fin(Index p)
{
  if (p < 1)
    throw PreconditionViolation("the fin needs at least one parameter");
  Vector lo = Vector::Constant(p, 0.1), hi = Vector::Constant(p, 10.0);
  lo(p - 1) = 0.01;
  hi(p - 1) = 1.0;
  return ParameterDomain(lo, hi);
}

bool ParameterDomain::contains(const ParameterVector &mu, double rel_tol) const
{
  if (mu.size() != dim())
    return false;
  for (Index i = 0; i < dim(); ++i)
  {
    const double slack = rel_tol * (upper_(i) - lower_(i));
    if (mu(i) < lower_(i) - slack || mu(i) > upper_(i) + slack)
      return false;
  }
  return true;
}

std::vector<ParameterVector> columns_of(const Matrix &X)
{
  std::vector<ParameterVector> out;
  out.reserve(static_cast<std::size_t>(X.cols()));
  for (Index j = 0; j < X.cols(); ++j)
    out.emplace_back(X.col(j));
  return out;
}

Matrix stack_columns(const std::vector<ParameterVector> &points)
{
  if (points.empty())
    return Matrix(0, 0);
  Matrix X(points.front().size(), static_cast<Index>(points.size()));
  for (std::size_t j = 0; j < points.size(); ++j)
  {
    if (points[j].size() != X.rows())
      throw DimensionMismatch("parameter points differ in length");
    X.col(static_cast<Index>(j)) = points[j];
  }
  return X;
}

}  // namespace morkit
