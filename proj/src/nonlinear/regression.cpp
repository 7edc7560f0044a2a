// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/nonlinear/regression.hpp"

#include <algorithm>
#include <numeric>

#include "morkit/error.hpp"

namespace morkit
{

namespace
{

Matrix solve_min_norm(const Matrix &features, const Matrix &targets, Index *rank)
{
  if (features.cols() != targets.cols())
    throw DimensionMismatch("feature and target sample counts differ");
  if (features.cols() < 1)
    throw PreconditionViolation("least squares needs at least one sample");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(features.transpose());
  if (rank)
    *rank = cod.rank();
  if (cod.rank() == 0)
    return Matrix::Zero(targets.rows(), features.rows());
  return cod.solve(targets.transpose()).transpose();
}

}  // namespace

Matrix fit_least_squares(const Matrix &features, const Matrix &targets)
{
  return solve_min_norm(features, targets, nullptr);
}

RegressionModel fit_regression(const FeatureMap &map, const Matrix &X, const Matrix &Y)
{
  if (X.rows() != map.input_dim())
    throw DimensionMismatch("regression inputs do not match the feature map");
  const Matrix F = map.eval_columns(X);
  RegressionModel model{map, Matrix(), {}};
  model.weights = solve_min_norm(F, Y, &model.training_report.rank);
  const Matrix R = model.weights * F - Y;
  model.training_report.rms = R.size() ? std::sqrt(R.squaredNorm() / static_cast<double>(R.size())) : 0.0;
  model.training_report.max_abs = R.size() ? R.cwiseAbs().maxCoeff() : 0.0;
  return model;
}

Vector NearestNeighborModel::predict(const Vector &x) const
{
  if (x.size() != inputs.rows())
    throw DimensionMismatch("nearest-neighbor query has the wrong length");
  const Index M = inputs.cols();
  const Index kk = std::min(k, M);
  if (kk < 1)
    throw PreconditionViolation("nearest-neighbor model has no training samples");
  std::vector<double> d(static_cast<std::size_t>(M));
  for (Index j = 0; j < M; ++j)
    d[static_cast<std::size_t>(j)] = (inputs.col(j) - x).squaredNorm();
  std::vector<Index> order(static_cast<std::size_t>(M));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + kk, order.end(), [&](Index a, Index b) {
    const double da = d[static_cast<std::size_t>(a)], db = d[static_cast<std::size_t>(b)];
    return da < db || (da == db && a < b);
  });
  Vector out = Vector::Zero(outputs.rows());
  for (Index i = 0; i < kk; ++i)
    out += outputs.col(order[static_cast<std::size_t>(i)]);
  return out / static_cast<double>(kk);
}

CoefficientRegressor CoefficientRegressor::zero(Index input_dim, Index output_dim)
{
  return CoefficientRegressor(Kind::Zero, input_dim, output_dim);
}

CoefficientRegressor CoefficientRegressor::polynomial(RegressionModel model)
{
  CoefficientRegressor r(Kind::Polynomial, model.feature_map.input_dim(), model.weights.rows());
  if (model.weights.cols() != model.feature_map.output_dim())
    throw DimensionMismatch("regression weights do not match the feature map");
  r.poly_ = std::move(model);
  return r;
}

CoefficientRegressor CoefficientRegressor::nearest_neighbor(NearestNeighborModel model)
{
  if (model.inputs.cols() != model.outputs.cols())
    throw DimensionMismatch("nearest-neighbor inputs and outputs differ in sample count");
  CoefficientRegressor r(Kind::NearestNeighbor, model.inputs.rows(), model.outputs.rows());
  r.knn_ = std::move(model);
  return r;
}

Vector CoefficientRegressor::predict(const Vector &x) const
{
  if (x.size() != in_)
    throw DimensionMismatch("regressor input has the wrong length");
  switch (kind_)
  {
  case Kind::Zero:
    return Vector::Zero(out_);
  case Kind::Polynomial:
    return poly_->predict(x);
  case Kind::NearestNeighbor:
    return knn_->predict(x);
  }
  return Vector::Zero(out_);
}

const RegressionModel &CoefficientRegressor::polynomial_model() const
{
  if (!poly_)
    throw PreconditionViolation("regressor is not polynomial");
  return *poly_;
}

const NearestNeighborModel &CoefficientRegressor::neighbor_model() const
{
  if (!knn_)
    throw PreconditionViolation("regressor is not nearest-neighbor");
  return *knn_;
}

}  // namespace morkit
