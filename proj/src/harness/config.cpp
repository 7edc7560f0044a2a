// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/harness/config.hpp"

#include <sstream>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "morkit/error.hpp"

namespace morkit::harness
{

struct Config::Impl
{
  toml::table root;
};

Config::Config() : impl_(std::make_unique<Impl>()) {}
Config::~Config() = default;
Config::Config(const Config &o) : impl_(std::make_unique<Impl>(*o.impl_)) {}
Config &Config::operator=(const Config &o)
{
  if (this != &o)
    impl_ = std::make_unique<Impl>(*o.impl_);
  return *this;
}
Config::Config(Config &&) noexcept = default;
Config &Config::operator=(Config &&) noexcept = default;

Config Config::from_file(const std::string &path)
{
  Config c;
  try
  {
    c.impl_->root = toml::parse_file(path);
  }
  catch (const toml::parse_error &e)
  {
    std::ostringstream os;
    os << path << ": " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(os.str());
  }
  return c;
}

Config Config::from_string(const std::string &text, const std::string &source)
{
  Config c;
  try
  {
    c.impl_->root = toml::parse(text, source);
  }
  catch (const toml::parse_error &e)
  {
    std::ostringstream os;
    os << source << ": " << e.description() << " at line " << e.source().begin.line;
    throw ConfigError(os.str());
  }
  return c;
}

namespace
{

std::vector<std::string> split_key(const std::string &key)
{
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : key)
  {
    if (ch == '.')
    {
      parts.push_back(cur);
      cur.clear();
    }
    else
      cur += ch;
  }
  parts.push_back(cur);
  for (const auto &p : parts)
    if (p.empty())
      throw ConfigError("malformed key '" + key + "'");
  return parts;
}

const toml::node *find(const toml::table &root, const std::string &key)
{
  return root.at_path(key).node();
}

const toml::node &need(const toml::table &root, const std::string &key)
{
  const toml::node *n = find(root, key);
  if (!n)
  {
    const auto dot = key.find('.');
    if (dot != std::string::npos && !find(root, key.substr(0, dot)))
      throw ConfigError("missing section [" + key.substr(0, dot) + "] (needed for '" + key + "')");
    throw ConfigError("missing key '" + key + "'");
  }
  return *n;
}

double as_double(const toml::node &n, const std::string &key)
{
  if (auto v = n.value_exact<double>())
    return *v;
  if (auto i = n.value_exact<std::int64_t>())
    return static_cast<double>(*i);
  throw ConfigError("key '" + key + "' must be a number");
}

toml::table &parent_table(toml::table &root, const std::vector<std::string> &parts)
{
  toml::table *t = &root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
  {
    toml::node *n = t->get(parts[i]);
    if (!n)
    {
      t->insert(parts[i], toml::table{});
      n = t->get(parts[i]);
    }
    if (!n->is_table())
      throw ConfigError("'" + parts[i] + "' is not a section");
    t = n->as_table();
  }
  return *t;
}

}  // namespace

void Config::apply_override(const std::string &assignment)
{
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  const std::string key = assignment.substr(0, eq);
  const std::string value = assignment.substr(eq + 1);
  const auto parts = split_key(key);
  toml::table &parent = parent_table(impl_->root, parts);

  toml::table parsed;
  try
  {
    parsed = toml::parse("v = " + value);
  }
  catch (const toml::parse_error &)
  {
    parsed = toml::table{{"v", value}};
  }
  parent.insert_or_assign(parts.back(), std::move(*parsed.get("v")));
}

bool Config::has(const std::string &key) const { return find(impl_->root, key) != nullptr; }

void Config::require_section(const std::string &section) const
{
  const toml::node *n = find(impl_->root, section);
  if (!n || !n->is_table())
    throw ConfigError("missing section [" + section + "]");
}

std::int64_t Config::get_int(const std::string &key) const
{
  const toml::node &n = need(impl_->root, key);
  if (auto v = n.value_exact<std::int64_t>())
    return *v;
  throw ConfigError("key '" + key + "' must be an integer");
}

std::int64_t Config::get_int(const std::string &key, std::int64_t fallback) const
{
  return has(key) ? get_int(key) : fallback;
}

double Config::get_double(const std::string &key) const { return as_double(need(impl_->root, key), key); }

double Config::get_double(const std::string &key, double fallback) const
{
  return has(key) ? get_double(key) : fallback;
}

bool Config::get_bool(const std::string &key, bool fallback) const
{
  if (!has(key))
    return fallback;
  if (auto v = need(impl_->root, key).value_exact<bool>())
    return *v;
  throw ConfigError("key '" + key + "' must be a boolean");
}

std::string Config::get_string(const std::string &key) const
{
  if (auto v = need(impl_->root, key).value_exact<std::string>())
    return *v;
  throw ConfigError("key '" + key + "' must be a string");
}

std::string Config::get_string(const std::string &key, const std::string &fallback) const
{
  return has(key) ? get_string(key) : fallback;
}

std::vector<double> Config::get_doubles(const std::string &key) const
{
  const toml::node &n = need(impl_->root, key);
  const toml::array *a = n.as_array();
  if (!a)
    throw ConfigError("key '" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const toml::node &e : *a)
    out.push_back(as_double(e, key));
  return out;
}

std::optional<std::vector<double>> Config::find_doubles(const std::string &key) const
{
  if (!has(key))
    return std::nullopt;
  return get_doubles(key);
}

std::vector<std::int64_t> Config::get_ints(const std::string &key, const std::vector<std::int64_t> &fallback) const
{
  if (!has(key))
    return fallback;
  const toml::node &n = need(impl_->root, key);
  if (auto single = n.value_exact<std::int64_t>())
    return {*single};
  const toml::array *a = n.as_array();
  if (!a)
    throw ConfigError("key '" + key + "' must be an integer or an array of integers");
  std::vector<std::int64_t> out;
  for (const toml::node &e : *a)
  {
    auto v = e.value_exact<std::int64_t>();
    if (!v)
      throw ConfigError("key '" + key + "' must be an array of integers");
    out.push_back(*v);
  }
  return out;
}

void Config::set_int(const std::string &key, std::int64_t value)
{
  const auto parts = split_key(key);
  parent_table(impl_->root, parts).insert_or_assign(parts.back(), value);
}

std::string Config::canonical() const
{
  std::ostringstream os;
  os << toml::toml_formatter(impl_->root, toml::toml_formatter::default_flags & ~toml::format_flags::indentation);
  return os.str();
}

}  // namespace morkit::harness
