// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_BASIS_GREEDY_HPP
#define MORKIT_BASIS_GREEDY_HPP

#include <limits>

#include "morkit/basis/estimator.hpp"

namespace morkit
{

struct GreedyOptions
{
  double epsilon = 0.0;
  Index max_iterations = 1;
  Index mu_init_index = 0;  // position of the initial parameter in the training set
};

// Snapshots and orthonormal basis collected by the greedy loop.
struct GreedyRun
{
  SnapshotMatrix snapshots;  // raw solutions in selection order
  SubspaceBasis orthonormal;  // Gram-Schmidt basis used by the estimator
  std::vector<Index> selected_indices;
  std::vector<double> max_estimates;  // max over the training set after each step
  std::vector<std::string> notes;
};

// The shared greedy loop. The first enrichment always happens, so epsilon = +inf
// still yields a one-dimensional basis. Ties in the argmax go to the lowest index.
// A selected snapshot that is numerically in the current span ends the loop with a
// note instead of an exception.
GreedyRun greedy_sample(const HighFidelityModel &model, const std::vector<ParameterVector> &training,
                        const GreedyOptions &options);

ReducedBasis weak_greedy(const HighFidelityModel &model, const std::vector<ParameterVector> &training,
                         double epsilon, Index N_max, Index mu_init_index = 0);

// Greedy-sampled SVD: M2 greedy iterations, then POD of the raw selected snapshots
// keeping N modes. Requires N <= M2 <= |training|.
ReducedBasis gss(const HighFidelityModel &model, const std::vector<ParameterVector> &training,
                 Index M2, Index N, Index mu_init_index = 0);

}  // namespace morkit

#endif  // MORKIT_BASIS_GREEDY_HPP
