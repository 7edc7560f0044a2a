// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/basis/greedy.hpp"

#include <cmath>

#include "morkit/error.hpp"
#include "morkit/numerics/parallel.hpp"

namespace morkit
{

GreedyRun greedy_sample(const HighFidelityModel &model, const std::vector<ParameterVector> &training,
                        const GreedyOptions &options)
{
  if (training.empty())
    throw PreconditionViolation("greedy training set is empty");
  if (options.max_iterations < 1)
    throw PreconditionViolation("greedy needs at least one iteration");
  if (options.mu_init_index < 0 || options.mu_init_index >= static_cast<Index>(training.size()))
    throw PreconditionViolation("initial parameter index is outside the training set");

  const InnerProduct &metric = model.metric();
  HighFidelitySolver solver(model);
  ErrorEstimator estimator(model);

  GreedyRun run{SnapshotMatrix{}, SubspaceBasis::empty(metric), {}, {}, {}};
  run.snapshots.columns.resize(model.dofs(), 0);
  Matrix W(model.dofs(), 0);
  std::vector<double> delta(training.size());

  Index next = options.mu_init_index;
  double current = INFINITY;
  while (static_cast<Index>(run.selected_indices.size()) < options.max_iterations &&
         (run.selected_indices.empty() || current > options.epsilon))
  {
    const ParameterVector &mu = training[static_cast<std::size_t>(next)];
    solver.factorize(mu);
    const Vector u = solver.state();

    Vector z;
    try
    {
      z = gram_schmidt(W, u, metric);
    }
    catch (const DegenerateVector &e)
    {
      run.notes.push_back("stopped at dimension " + std::to_string(W.cols()) +
                          ": selected snapshot lies in the current span (" + e.what() + ")");
      break;
    }

    const Index n = W.cols();
    W.conservativeResize(Eigen::NoChange, n + 1);
    W.col(n) = z;
    run.snapshots.columns.conservativeResize(Eigen::NoChange, n + 1);
    run.snapshots.columns.col(n) = u;
    run.snapshots.parameters.push_back(mu);
    run.selected_indices.push_back(next);
    estimator.append(z);

    parallel_for(training.size(),
                 [&](std::size_t i) { delta[i] = estimator.evaluate(training[i]).delta; });
    Index best = 0;
    for (std::size_t i = 1; i < delta.size(); ++i)
      if (delta[i] > delta[static_cast<std::size_t>(best)])
        best = static_cast<Index>(i);
    next = best;
    current = delta[static_cast<std::size_t>(best)];
    run.max_estimates.push_back(current);
  }

  run.orthonormal = SubspaceBasis(std::move(W), metric);
  return run;
}

ReducedBasis weak_greedy(const HighFidelityModel &model, const std::vector<ParameterVector> &training,
                         double epsilon, Index N_max, Index mu_init_index)
{
  GreedyRun run = greedy_sample(model, training, GreedyOptions{epsilon, N_max, mu_init_index});
  ReducedBasis rb(run.orthonormal, Construction::Greedy);
  rb.selected_indices = run.selected_indices;
  rb.selected_parameters = run.snapshots.parameters;
  rb.max_estimates = run.max_estimates;
  rb.notes = run.notes;
  return rb;
}

ReducedBasis gss(const HighFidelityModel &model, const std::vector<ParameterVector> &training,
                 Index M2, Index N, Index mu_init_index)
{
  if (N < 1 || N > M2)
    throw PreconditionViolation("GSS needs 1 <= N <= M2");
  if (M2 > static_cast<Index>(training.size()))
    throw PreconditionViolation("GSS needs M2 <= training set size");
  // No tolerance: GSS always runs the requested number of greedy iterations.
  GreedyRun run = greedy_sample(model, training, GreedyOptions{-1.0, M2, mu_init_index});
  if (run.snapshots.size() < N)
    throw RankDeficient("greedy phase stopped before collecting N snapshots", run.snapshots.size());

  ReducedBasis rb = pod(run.snapshots, model.metric(), N, false);
  rb.construction = Construction::Gss;
  rb.selected_indices = run.selected_indices;
  rb.selected_parameters = run.snapshots.parameters;
  rb.max_estimates = run.max_estimates;
  rb.notes = run.notes;
  return rb;
}

}  // namespace morkit
