// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/harness/runner.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <functional>
#include <iostream>
#include <map>

#include "morkit/harness/artifacts.hpp"
#include "morkit/harness/config.hpp"
#include "subcommands.hpp"

namespace morkit::harness
{

int exit_code(ErrorClass cls)
{
  switch (cls)
  {
  case ErrorClass::Config:
    return 2;
  case ErrorClass::Solve:
    return 3;
  case ErrorClass::Numerical:
    return 4;
  case ErrorClass::Format:
    return 5;
  case ErrorClass::Io:
    return 6;
  case ErrorClass::Precondition:
    return 7;
  }
  return 1;
}

namespace
{

struct Entry
{
  std::string name;
  std::vector<std::string> variants;
  std::function<void(detail::Context &)> body;
  std::string help;
};

const std::vector<Entry> &table()
{
  static const std::vector<Entry> entries = {
    {"snapshots", {}, detail::run_snapshots, "Solve the full model on a sampled training set"},
    {"basis", {"pod", "greedy", "gss"}, detail::run_basis, "Build a reduced basis"},
    {"compare-bases", {}, detail::run_compare_bases, "Test-set errors of POD, greedy and GSS bases"},
    {"ncrba-train", {}, detail::run_ncrba_train, "Train the coefficient regressor of an NCRBA model"},
    {"ncrba-solve", {}, detail::run_ncrba_solve, "Online Picard solves with an NCRBA model"},
    {"quadratic", {"qsvdm", "qgm"}, detail::run_quadratic, "Train quadratic manifolds"},
    {"toy-quadratic", {}, detail::run_toy_quadratic, "Two-dimensional quadratic toy reconstruction"},
    {"taylor-convergence", {}, detail::run_taylor_convergence, "Local SVD convergence rates around a parameter"},
    {"quad-law", {}, detail::run_quad_law, "Quadratic law between chart coefficients"},
    {"report", {}, detail::run_report, "Verify and summarize artifact manifests"},
  };
  return entries;
}

const Entry &lookup(const std::string &name)
{
  for (const Entry &e : table())
    if (e.name == name)
      return e;
  throw ConfigError("unknown subcommand '" + name + "'");
}

}  // namespace

const std::vector<std::string> &subcommand_names()
{
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const Entry &e : table())
      out.push_back(e.name);
    return out;
  }();
  return names;
}

std::vector<std::string> subcommand_variants(const std::string &subcommand) { return lookup(subcommand).variants; }

void execute(const Invocation &inv, std::ostream &log)
{
  const Entry &entry = lookup(inv.subcommand);
  if (entry.variants.empty() && !inv.variant.empty())
    throw ConfigError("subcommand '" + inv.subcommand + "' takes no variant");
  if (!entry.variants.empty() &&
      std::find(entry.variants.begin(), entry.variants.end(), inv.variant) == entry.variants.end())
    throw ConfigError("subcommand '" + inv.subcommand + "' needs one of: " + [&] {
      std::string s;
      for (const auto &v : entry.variants)
        s += (s.empty() ? "" : "|") + v;
      return s;
    }());

  Config cfg;
  if (!inv.config_path.empty())
    cfg = Config::from_file(inv.config_path);
  else if (inv.subcommand != "report")
    throw ConfigError("--config is required for '" + inv.subcommand + "'");
  for (const auto &o : inv.overrides)
    cfg.apply_override(o);
  if (inv.seed)
    cfg.set_int("sampling.seed", static_cast<std::int64_t>(*inv.seed));

  ArtifactStore store(inv.out_dir);
  detail::Context ctx{cfg, store, log, inv.variant, std::nullopt};
  entry.body(ctx);

  const std::string snapshot = cfg.canonical();
  store.put_bytes("config.toml", snapshot);
  const std::string name = inv.variant.empty() ? inv.subcommand : inv.subcommand + " " + inv.variant;
  store.write_manifest(name, snapshot, ctx.seed.value_or(0));
  log << "wrote " << store.hashes().size() << " artifacts and manifest.json to " << store.root() << "\n";
}

int run(const Invocation &inv, std::ostream &log, std::ostream &err)
{
  try
  {
    execute(inv, log);
    return 0;
  }
  catch (const Error &e)
  {
    err << "morkit " << inv.subcommand << ": " << e.what() << "\n";
    return exit_code(e.error_class());
  }
  catch (const std::exception &e)
  {
    err << "morkit " << inv.subcommand << ": " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, char **argv)
{
  CLI::App app{"morkit: reduced basis, quadratic manifold and local chart experiments"};
  app.set_version_flag("--version", std::string(MORKIT_VERSION));
  app.require_subcommand(1, 1);

  Invocation inv;
  std::int64_t seed = -1;
  for (const Entry &e : table())
  {
    CLI::App *sub = app.add_subcommand(e.name, e.help);
    if (!e.variants.empty())
      sub->add_option("variant", inv.variant, "One of the construction methods")
        ->required()
        ->check(CLI::IsMember(e.variants));
    sub->add_option("-c,--config", inv.config_path, "TOML experiment configuration")->check(CLI::ExistingFile);
    sub->add_option("--set", inv.overrides, "Override a configuration key (section.key=value)");
    sub->add_option("-o,--out", inv.out_dir, "Artifact directory")->capture_default_str();
    sub->add_option("--seed", seed, "Replace sampling.seed")->check(CLI::NonNegativeNumber);
  }

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError &e)
  {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code(ErrorClass::Config);
  }
  inv.subcommand = app.get_subcommands().front()->get_name();
  if (seed >= 0)
    inv.seed = static_cast<std::uint64_t>(seed);
  return run(inv, std::cout, std::cerr);
}

}  // namespace morkit::harness
