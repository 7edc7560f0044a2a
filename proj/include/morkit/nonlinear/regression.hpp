// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_NONLINEAR_REGRESSION_HPP
#define MORKIT_NONLINEAR_REGRESSION_HPP

#include <optional>

#include "morkit/nonlinear/features.hpp"

namespace morkit
{

// Minimal-norm minimizer of ||weights * features - targets||_F, computed with a
// complete orthogonal decomposition of features^T. features is m x M, targets k x M;
// the result is k x m.
Matrix fit_least_squares(const Matrix &features, const Matrix &targets);

struct RegressionReport
{
  double rms = 0.0;      // root mean square residual over all entries
  double max_abs = 0.0;  // largest absolute residual entry
  Index rank = 0;        // numerical rank of the feature matrix
};

struct RegressionModel
{
  FeatureMap feature_map;
  Matrix weights;  // outputs x m
  RegressionReport training_report;

  Vector predict(const Vector &x) const { return weights * feature_map.eval(x); }
};

// Fits weights on input columns X (n x M) and target columns Y (k x M).
RegressionModel fit_regression(const FeatureMap &map, const Matrix &X, const Matrix &Y);

// Mean of the k nearest training outputs (Euclidean distance on inputs, ties broken
// toward the lower training index).
struct NearestNeighborModel
{
  Index k = 1;
  Matrix inputs;   // n x M
  Matrix outputs;  // outputs x M

  Vector predict(const Vector &x) const;
};

// Regressor psi_hat: R^n -> R^{N-n}. Zero is the identically vanishing map.
class CoefficientRegressor
{
public:
  enum class Kind
  {
    Zero,
    Polynomial,
    NearestNeighbor,
  };

  static CoefficientRegressor zero(Index input_dim, Index output_dim);
  static CoefficientRegressor polynomial(RegressionModel model);
  static CoefficientRegressor nearest_neighbor(NearestNeighborModel model);

  Kind kind() const { return kind_; }
  Index input_dim() const { return in_; }
  Index output_dim() const { return out_; }
  Vector predict(const Vector &x) const;

  const RegressionModel &polynomial_model() const;
  const NearestNeighborModel &neighbor_model() const;

private:
  CoefficientRegressor(Kind kind, Index in, Index out) : kind_(kind), in_(in), out_(out) {}

  Kind kind_;
  Index in_;
  Index out_;
  std::optional<RegressionModel> poly_;
  std::optional<NearestNeighborModel> knn_;
};

}  // namespace morkit

#endif  // MORKIT_NONLINEAR_REGRESSION_HPP
