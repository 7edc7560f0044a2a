// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/numerics/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "morkit/error.hpp"

namespace morkit
{
namespace
{

// FNV-1a followed by a splitmix64 finalizer.
std::uint64_t mix(std::uint64_t seed, std::string_view name)
{
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : name)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::uint64_t z = seed ^ h;
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace

Rng Rng::stream(std::string_view name) const { return Rng(mix(seed_, name)); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal()
{
  double u1 = uniform();
  while (u1 <= 0.0)
    u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::uint64_t Rng::below(std::uint64_t n)
{
  if (n == 0)
    throw PreconditionViolation("empty integer range");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do
    x = engine_();
  while (x >= limit);
  return x % n;
}

Matrix Rng::uniform_matrix(Index rows, Index cols, double lo, double hi)
{
  Matrix X(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      X(i, j) = uniform(lo, hi);
  return X;
}

Matrix Rng::normal_matrix(Index rows, Index cols)
{
  Matrix X(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i)
      X(i, j) = normal();
  return X;
}

Matrix uniform_box(Rng &rng, const Vector &lower, const Vector &upper, Index count)
{
  if (lower.size() != upper.size())
    throw DimensionMismatch("box bounds differ in length");
  Matrix X(lower.size(), count);
  for (Index j = 0; j < count; ++j)
    for (Index i = 0; i < lower.size(); ++i)
      X(i, j) = rng.uniform(lower(i), upper(i));
  return X;
}

Matrix latin_hypercube(Rng &rng, const Vector &lower, const Vector &upper, Index count)
{
  if (lower.size() != upper.size())
    throw DimensionMismatch("box bounds differ in length");
  const Index d = lower.size();
  Matrix X(d, count);
  std::vector<Index> perm(static_cast<std::size_t>(count));
  for (Index i = 0; i < d; ++i)
  {
    std::iota(perm.begin(), perm.end(), Index{0});
    // Fisher-Yates with our own integer draw for portability.
    for (Index k = count - 1; k > 0; --k)
    {
      const auto j = static_cast<Index>(rng.below(static_cast<std::uint64_t>(k + 1)));
      std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(j)]);
    }
    for (Index j = 0; j < count; ++j)
    {
      const double t = (static_cast<double>(perm[static_cast<std::size_t>(j)]) + rng.uniform()) /
                       static_cast<double>(count);
      X(i, j) = lower(i) + (upper(i) - lower(i)) * t;
    }
  }
  return X;
}

Matrix random_orthogonal(Rng &rng, Index n)
{
  const Matrix G = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR();
  for (Index j = 0; j < n; ++j)
    if (R(j, j) < 0.0)
      Q.col(j) = -Q.col(j);
  return Q;
}

Matrix random_spd(Rng &rng, Index n, double cond)
{
  const Matrix Q = random_orthogonal(rng, n);
  Vector d(n);
  for (Index i = 0; i < n; ++i)
    d(i) = std::pow(cond, n > 1 ? static_cast<double>(i) / static_cast<double>(n - 1) : 0.0);
  Matrix A = Q * d.asDiagonal() * Q.transpose();
  return 0.5 * (A + A.transpose());
}

}  // namespace morkit
