// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#include "morkit/harness/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numeric>
#include <sstream>

#include "morkit/error.hpp"

namespace morkit::harness
{
namespace
{

constexpr char kMagic[5] = {'M', 'O', 'R', 'K', '1'};
constexpr std::size_t kHeader = sizeof(kMagic) + 2 * sizeof(std::uint64_t);

void put_u64(std::string &out, std::uint64_t v)
{
  for (int b = 0; b < 8; ++b)
    out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

std::uint64_t get_u64(const std::string &in, std::size_t at)
{
  std::uint64_t v = 0;
  for (int b = 0; b < 8; ++b)
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[at + static_cast<std::size_t>(b)])) << (8 * b);
  return v;
}

}  // namespace

std::string encode_matrix(const Matrix &A)
{
  std::string out(kMagic, sizeof(kMagic));
  put_u64(out, static_cast<std::uint64_t>(A.rows()));
  put_u64(out, static_cast<std::uint64_t>(A.cols()));
  out.reserve(out.size() + static_cast<std::size_t>(A.size()) * 8);
  for (Index k = 0; k < A.size(); ++k)
    put_u64(out, std::bit_cast<std::uint64_t>(A.data()[k]));
  return out;
}

Matrix decode_matrix(const std::string &bytes, const std::string &source)
{
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw FormatError(source + ": bad magic (expected MORK1)");
  if (bytes.size() < kHeader)
    throw FormatError(source + ": truncated header");
  const std::uint64_t rows = get_u64(bytes, sizeof(kMagic));
  const std::uint64_t cols = get_u64(bytes, sizeof(kMagic) + 8);
  const std::uint64_t payload = bytes.size() - kHeader;
  if (rows != 0 && cols > payload / 8 / rows)
    throw FormatError(source + ": truncated payload");
  if (payload != rows * cols * 8)
    throw FormatError(source + ": payload size " + std::to_string(payload) + " does not match " +
                      std::to_string(rows) + "x" + std::to_string(cols));
  Matrix A(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index k = 0; k < A.size(); ++k)
    A.data()[k] = std::bit_cast<double>(get_u64(bytes, kHeader + 8 * static_cast<std::size_t>(k)));
  return A;
}

void write_text(const std::string &path, const std::string &content)
{
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("cannot open " + path + " for writing");
  os.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!os)
    throw IoError("write failed for " + path);
}

std::string read_text(const std::string &path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open " + path + " for reading");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void save_matrix(const std::string &path, const Matrix &A) { write_text(path, encode_matrix(A)); }

Matrix load_matrix(const std::string &path) { return decode_matrix(read_text(path), path); }

std::string format_number(double x)
{
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_number(const std::string &token, const std::string &source)
{
  std::size_t b = 0, e = token.size();
  while (b < e && (token[b] == ' ' || token[b] == '\t'))
    ++b;
  while (e > b && (token[e - 1] == ' ' || token[e - 1] == '\t' || token[e - 1] == '\r'))
    --e;
  double v = 0.0;
  const char *first = token.data() + b;
  const char *last = token.data() + e;
  if (first != last && *first == '+')
    ++first;
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last || first == last)
    throw FormatError(source + ": cannot parse number '" + token + "'");
  return v;
}

void export_csv(const std::string &path, const Matrix &A)
{
  std::string out;
  for (Index i = 0; i < A.rows(); ++i)
  {
    for (Index j = 0; j < A.cols(); ++j)
    {
      if (j)
        out += ',';
      out += format_number(A(i, j));
    }
    out += '\n';
  }
  write_text(path, out);
}

Matrix import_csv(const std::string &path)
{
  const std::string text = read_text(path);
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line))
  {
    if (line.empty() || line == "\r")
      continue;
    std::vector<double> r;
    std::size_t start = 0;
    while (true)
    {
      const std::size_t comma = line.find(',', start);
      r.push_back(parse_number(line.substr(start, comma - start), path));
      if (comma == std::string::npos)
        break;
      start = comma + 1;
    }
    if (!rows.empty() && r.size() != rows.front().size())
      throw FormatError(path + ": ragged CSV rows");
    rows.push_back(std::move(r));
  }
  const Index m = static_cast<Index>(rows.size());
  const Index n = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      A(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return A;
}

Table::Table(std::vector<std::string> columns) : columns_(std::move(columns))
{
  if (columns_.empty())
    throw PreconditionViolation("table needs at least one column");
}

Table &Table::row(const std::vector<std::string> &cells)
{
  if (cells.size() != columns_.size())
    throw DimensionMismatch("table row has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(columns_.size()));
  rows_.push_back(cells);
  return *this;
}

Table &Table::row(const std::vector<double> &values)
{
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values)
    cells.push_back(format_number(v));
  return row(cells);
}

namespace
{

std::string join(const std::vector<std::string> &cells, char sep)
{
  std::string out;
  for (std::size_t k = 0; k < cells.size(); ++k)
  {
    if (k)
      out += sep;
    out += cells[k];
  }
  return out + '\n';
}

}  // namespace

std::string Table::to_csv() const
{
  std::string out = join(columns_, ',');
  for (const auto &r : rows_)
    out += join(r, ',');
  return out;
}

std::string Table::to_dat() const
{
  std::string out = join(columns_, ' ');
  for (const auto &r : rows_)
    out += join(r, ' ');
  return out;
}

void emit_plot_data(const Table &table, const std::string &path, PlotFormat format)
{
  if (table.empty())
    throw PreconditionViolation("refusing to write an empty table to " + path);
  write_text(path, format == PlotFormat::Csv ? table.to_csv() : table.to_dat());
}

Table series_table(const std::vector<double> &radii, const std::vector<double> &values,
                   const std::string &value_name)
{
  if (radii.size() != values.size())
    throw DimensionMismatch("series radii and values differ in length");
  std::vector<std::size_t> order(radii.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return radii[a] > radii[b]; });
  Table t({"r", value_name});
  for (std::size_t k : order)
    t.row(std::vector<double>{radii[k], values[k]});
  return t;
}

}  // namespace morkit::harness
