// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_SRC_HARNESS_SUBCOMMANDS_HPP
#define MORKIT_SRC_HARNESS_SUBCOMMANDS_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "morkit/harness/artifacts.hpp"
#include "morkit/harness/config.hpp"

namespace morkit::harness::detail
{

struct Context
{
  const Config &cfg;
  ArtifactStore &store;
  std::ostream &log;
  std::string variant;
  std::optional<std::uint64_t> seed;  // set once a subcommand draws randomness
};

void run_snapshots(Context &ctx);
void run_basis(Context &ctx);
void run_compare_bases(Context &ctx);
void run_ncrba_train(Context &ctx);
void run_ncrba_solve(Context &ctx);
void run_quadratic(Context &ctx);
void run_toy_quadratic(Context &ctx);
void run_taylor_convergence(Context &ctx);
void run_quad_law(Context &ctx);
void run_report(Context &ctx);

}  // namespace morkit::harness::detail

#endif  // MORKIT_SRC_HARNESS_SUBCOMMANDS_HPP
