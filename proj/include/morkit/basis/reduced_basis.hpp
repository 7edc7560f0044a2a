// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_BASIS_REDUCED_BASIS_HPP
#define MORKIT_BASIS_REDUCED_BASIS_HPP

#include <optional>
#include <string>
#include <vector>

#include "morkit/basis/snapshots.hpp"
#include "morkit/numerics/decompositions.hpp"

namespace morkit
{

enum class Construction
{
  Pod,
  Greedy,
  Gss,
};

const char *to_string(Construction c);

struct ReducedBasis
{
  explicit ReducedBasis(SubspaceBasis b, Construction c = Construction::Pod)
    : basis(std::move(b)), construction(c)
  {
  }

  SubspaceBasis basis;
  Construction construction = Construction::Pod;
  std::optional<Vector> singular_values;
  // Greedy trace: selected training indices and parameters, and the largest
  // estimate over the training set after each enrichment.
  std::vector<Index> selected_indices;
  std::vector<ParameterVector> selected_parameters;
  std::vector<double> max_estimates;
  std::vector<std::string> notes;

  Index size() const { return basis.size(); }
};

// First N weighted-SVD modes of S (optionally after centering). Throws
// RankDeficient when N exceeds the numerical rank.
ReducedBasis pod(const SnapshotMatrix &S, const InnerProduct &metric, Index N, bool centered = false);

struct ProjectionErrors
{
  Vector errors;  // one per column
  double mean = 0.0;
  double max = 0.0;
};

// ||s - V V^T M s||_X per column; divided by ||s||_X when `relative`.
ProjectionErrors projection_error(const SnapshotMatrix &S_test, const SubspaceBasis &V,
                                  bool relative = false);

// Errors for every leading sub-basis V[:, :N], N = 1..V.size(); row N-1 holds the
// column errors for dimension N. The residual is updated by rank-one steps in
// Euclidean coordinates, so small errors do not suffer from cancellation.
Matrix projection_error_curve(const SnapshotMatrix &S_test, const SubspaceBasis &V,
                              bool relative = false);

}  // namespace morkit

#endif  // MORKIT_BASIS_REDUCED_BASIS_HPP
