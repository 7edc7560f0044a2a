// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_HARNESS_ARTIFACTS_HPP
#define MORKIT_HARNESS_ARTIFACTS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "morkit/harness/io.hpp"

namespace morkit::harness
{

std::string sha256_hex(const std::string &bytes);

// Single-writer store rooted at one directory. Every file goes through the store,
// which refuses names that would escape the root and records a content hash.
class ArtifactStore
{
public:
  explicit ArtifactStore(std::string root);

  const std::string &root() const { return root_; }
  std::string path_of(const std::string &name) const;

  void put_bytes(const std::string &name, const std::string &bytes);
  void put_matrix(const std::string &name, const Matrix &A);
  void put_table(const std::string &name, const Table &table, PlotFormat format);

  const std::map<std::string, std::string> &hashes() const { return hashes_; }

  // Writes manifest.json: tool version, subcommand, config snapshot, seed and the
  // SHA-256 of every stored file.
  void write_manifest(const std::string &subcommand, const std::string &config_snapshot,
                      std::uint64_t seed);

private:
  std::string root_;
  std::map<std::string, std::string> hashes_;
};

// Re-hashes every file listed in a manifest; returns the names whose content no
// longer matches.
std::map<std::string, std::string> verify_manifest(const std::string &manifest_path);

}  // namespace morkit::harness

#endif  // MORKIT_HARNESS_ARTIFACTS_HPP
