// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_BASIS_SNAPSHOTS_HPP
#define MORKIT_BASIS_SNAPSHOTS_HPP

#include <optional>
#include <vector>

#include "morkit/models/high_fidelity.hpp"

namespace morkit
{

struct SnapshotMatrix
{
  Matrix columns;                          // dofs x M
  std::vector<ParameterVector> parameters;  // provenance, one per column
  std::optional<Vector> centered_mean;      // set iff the columns were centered

  Index size() const { return columns.cols(); }
  Index dofs() const { return columns.rows(); }
};

// Solves the model at every parameter (in parallel, ordered by index). A failing
// solve is rethrown as SolveFailure naming the parameter.
SnapshotMatrix build_snapshots(const HighFidelityModel &model,
                               const std::vector<ParameterVector> &parameters);

// Subtracts the column mean and records it.
SnapshotMatrix center(const SnapshotMatrix &S);

}  // namespace morkit

#endif  // MORKIT_BASIS_SNAPSHOTS_HPP
