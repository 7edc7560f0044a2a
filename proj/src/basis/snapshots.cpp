// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/basis/snapshots.hpp"

#include "morkit/error.hpp"
#include "morkit/numerics/parallel.hpp"

namespace morkit
{

SnapshotMatrix build_snapshots(const HighFidelityModel &model,
                               const std::vector<ParameterVector> &parameters)
{
  SnapshotMatrix S;
  S.parameters = parameters;
  S.columns.resize(model.dofs(), static_cast<Index>(parameters.size()));
  for (const auto &mu : parameters)
    if (mu.size() != model.num_parameters())
      throw DimensionMismatch("snapshot parameter length differs from model dimension");

  const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(),
                                                           static_cast<unsigned>(parameters.size())));
  // One solver per contiguous chunk keeps the symbolic analysis reusable.
  const std::size_t n = parameters.size();
  parallel_for(workers, [&](std::size_t w) {
    HighFidelitySolver solver(model);
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    for (std::size_t j = lo; j < hi; ++j)
    {
      solver.factorize(parameters[j]);
      S.columns.col(static_cast<Index>(j)) = solver.state();
    }
  });
  return S;
}

SnapshotMatrix center(const SnapshotMatrix &S)
{
  if (S.size() == 0)
    throw PreconditionViolation("cannot center an empty snapshot set");
  SnapshotMatrix C = S;
  const Vector mean = S.columns.rowwise().mean();
  C.columns.colwise() -= mean;
  C.centered_mean = mean;
  return C;
}

}  // namespace morkit
