// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_HARNESS_RUNNER_HPP
#define MORKIT_HARNESS_RUNNER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "morkit/error.hpp"

namespace morkit::harness
{

// Process exit status for each error class. Success is 0 and anything that is not
// a morkit::Error maps to 1.
int exit_code(ErrorClass cls);

struct Invocation
{
  std::string subcommand;  // e.g. "basis"
  std::string variant;     // e.g. "gss"; empty when the subcommand takes none
  std::string config_path;  // may be empty for `report`
  std::vector<std::string> overrides;  // "section.key=value"
  std::string out_dir = "morkit-out";
  std::optional<std::uint64_t> seed;   // replaces sampling.seed
};

const std::vector<std::string> &subcommand_names();
// Allowed variants for a subcommand (empty if it takes none).
std::vector<std::string> subcommand_variants(const std::string &subcommand);

// Runs one subcommand and writes its artifacts plus manifest.json under out_dir.
// Throws morkit::Error on failure.
void execute(const Invocation &inv, std::ostream &log);

// execute() with the error-to-exit-status mapping; diagnostics go to `err`.
int run(const Invocation &inv, std::ostream &log, std::ostream &err);

// Command-line entry point: morkit <subcommand> [variant] --config <path>
// [--set key=value]... [--out dir] [--seed n]
int cli_main(int argc, char **argv);

}  // namespace morkit::harness

#endif  // MORKIT_HARNESS_RUNNER_HPP
