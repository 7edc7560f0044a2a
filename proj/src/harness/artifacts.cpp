// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/harness/artifacts.hpp"

#include <openssl/evp.h>

#include <array>
#include <filesystem>
#include <json.hpp>
#include <memory>

#include "morkit/error.hpp"

namespace fs = std::filesystem;

namespace morkit::harness
{

std::string sha256_hex(const std::string &bytes)
{
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
    throw IoError("SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int k = 0; k < len; ++k)
  {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xf];
  }
  return out;
}

ArtifactStore::ArtifactStore(std::string root) : root_(std::move(root))
{
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec)
    throw IoError("cannot create artifact directory " + root_ + ": " + ec.message());
}

std::string ArtifactStore::path_of(const std::string &name) const
{
  const fs::path rel(name);
  if (name.empty() || rel.is_absolute() || rel.has_root_name())
    throw IoError("artifact name '" + name + "' must be a relative path");
  for (const auto &part : rel)
    if (part == "..")
      throw IoError("artifact name '" + name + "' escapes the artifact directory");
  return (fs::path(root_) / rel).string();
}

void ArtifactStore::put_bytes(const std::string &name, const std::string &bytes)
{
  const std::string path = path_of(name);
  const fs::path parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty())
    fs::create_directories(parent, ec);
  if (ec)
    throw IoError("cannot create " + parent.string() + ": " + ec.message());
  write_text(path, bytes);
  hashes_[fs::path(name).generic_string()] = sha256_hex(bytes);
}

void ArtifactStore::put_matrix(const std::string &name, const Matrix &A) { put_bytes(name, encode_matrix(A)); }

void ArtifactStore::put_table(const std::string &name, const Table &table, PlotFormat format)
{
  if (table.empty())
    throw PreconditionViolation("refusing to store an empty table as " + name);
  put_bytes(name, format == PlotFormat::Csv ? table.to_csv() : table.to_dat());
}

void ArtifactStore::write_manifest(const std::string &subcommand, const std::string &config_snapshot,
                                   std::uint64_t seed)
{
  nlohmann::json j;
  j["tool"] = "morkit";
  j["version"] = MORKIT_VERSION;
  j["subcommand"] = subcommand;
  j["seed"] = seed;
  j["config"] = config_snapshot;
  nlohmann::json files = nlohmann::json::object();
  for (const auto &[name, hash] : hashes_)
    files[name] = hash;
  j["artifacts"] = files;
  write_text(path_of("manifest.json"), j.dump(2) + "\n");
}

std::map<std::string, std::string> verify_manifest(const std::string &manifest_path)
{
  nlohmann::json j;
  try
  {
    j = nlohmann::json::parse(read_text(manifest_path));
  }
  catch (const nlohmann::json::exception &e)
  {
    throw FormatError(manifest_path + ": " + e.what());
  }
  if (!j.contains("artifacts") || !j["artifacts"].is_object())
    throw FormatError(manifest_path + ": no artifacts table");
  const fs::path dir = fs::path(manifest_path).parent_path();
  std::map<std::string, std::string> mismatched;
  for (const auto &[name, hash] : j["artifacts"].items())
  {
    const fs::path p = dir / name;
    std::string actual = "missing";
    if (fs::exists(p))
      actual = sha256_hex(read_text(p.string()));
    if (actual != hash.get<std::string>())
      mismatched[name] = actual;
  }
  return mismatched;
}

}  // namespace morkit::harness
