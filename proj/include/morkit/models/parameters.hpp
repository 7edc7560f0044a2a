// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_MODELS_PARAMETERS_HPP
#define MORKIT_MODELS_PARAMETERS_HPP

#include <vector>

#include "morkit/numerics/types.hpp"

namespace morkit
{

// A parameter point mu in R^p.
using ParameterVector = Vector;

// Admissible box [lower, upper] in R^p.
class ParameterDomain
{
public:
  ParameterDomain() = default;
  ParameterDomain(Vector lower, Vector upper);

  // The fin box [0.1, 10]^{p-1} x [0.01, 1].
  static ParameterDomain thermal_fin(Index p);

  Index dim() const { return lower_.size(); }
  const Vector &lower() const { return lower_; }
  const Vector &upper() const { return upper_; }
  Vector center() const { return 0.5 * (lower_ + upper_); }
  Vector half_widths() const { return 0.5 * (upper_ - lower_); }

  // Componentwise containment with a relative slack of `rel_tol` times the box width.
  bool contains(const ParameterVector &mu, double rel_tol = 1e-12) const;

private:
  Vector lower_;
  Vector upper_;
};

// Packs parameter points (columns) into a list and back.
std::vector<ParameterVector> columns_of(const Matrix &X);
Matrix stack_columns(const std::vector<ParameterVector> &points);

}  // namespace morkit

#endif  // MORKIT_MODELS_PARAMETERS_HPP
