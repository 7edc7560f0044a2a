// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_HARNESS_CONFIG_HPP
#define MORKIT_HARNESS_CONFIG_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace morkit::harness
{

// Experiment configuration: a TOML tree addressed by dotted keys ("model.p").
class Config
{
public:
  Config();
  ~Config();
  Config(const Config &);
  Config &operator=(const Config &);
  Config(Config &&) noexcept;
  Config &operator=(Config &&) noexcept;

  static Config from_file(const std::string &path);
  static Config from_string(const std::string &text, const std::string &source = "<string>");

  // "section.key=value"; value is parsed as a TOML value, falling back to a string.
  void apply_override(const std::string &assignment);

  bool has(const std::string &key) const;
  // Throws ConfigError naming the section when it is absent.
  void require_section(const std::string &section) const;

  std::int64_t get_int(const std::string &key) const;
  std::int64_t get_int(const std::string &key, std::int64_t fallback) const;
  double get_double(const std::string &key) const;
  double get_double(const std::string &key, double fallback) const;
  bool get_bool(const std::string &key, bool fallback) const;
  std::string get_string(const std::string &key) const;
  std::string get_string(const std::string &key, const std::string &fallback) const;
  std::vector<double> get_doubles(const std::string &key) const;
  std::optional<std::vector<double>> find_doubles(const std::string &key) const;
  // Accepts a single integer or an array of integers.
  std::vector<std::int64_t> get_ints(const std::string &key, const std::vector<std::int64_t> &fallback) const;

  void set_int(const std::string &key, std::int64_t value);

  // Deterministic TOML rendering (keys sorted), used in manifests.
  std::string canonical() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace morkit::harness

#endif  // MORKIT_HARNESS_CONFIG_HPP
