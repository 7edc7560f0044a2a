// Copyright The morkit Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef MORKIT_HARNESS_IO_HPP
#define MORKIT_HARNESS_IO_HPP

#include <string>
#include <vector>

#include "morkit/numerics/types.hpp"

namespace morkit::harness
{

// Binary container: the 5 bytes "MORK1", rows and cols as little-endian u64, then
// rows*cols little-endian IEEE doubles in column-major order.
void save_matrix(const std::string &path, const Matrix &A);
Matrix load_matrix(const std::string &path);
std::string encode_matrix(const Matrix &A);
Matrix decode_matrix(const std::string &bytes, const std::string &source = "<memory>");

// 17-significant-digit rendering, independent of the C locale.
std::string format_number(double x);
double parse_number(const std::string &token, const std::string &source);

// CSV mirror of the binary container: one matrix row per line, no header.
void export_csv(const std::string &path, const Matrix &A);
Matrix import_csv(const std::string &path);

// A column-oriented table whose cells are numbers or text labels.
class Table
{
public:
  explicit Table(std::vector<std::string> columns);

  Table &row(const std::vector<std::string> &cells);
  Table &row(const std::vector<double> &values);

  const std::vector<std::string> &columns() const { return columns_; }
  const std::vector<std::vector<std::string>> &rows() const { return rows_; }
  bool empty() const { return rows_.empty(); }

  std::string to_csv() const;
  // Whitespace-delimited, one header line of column names.
  std::string to_dat() const;

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

enum class PlotFormat
{
  Dat,
  Csv,
};

// Writes `table` to `path`; throws PreconditionViolation on an empty table and
// IoError when the file cannot be written.
void emit_plot_data(const Table &table, const std::string &path, PlotFormat format);

// Two-column "r value" table with radii in descending order.
Table series_table(const std::vector<double> &radii, const std::vector<double> &values,
                   const std::string &value_name = "value");

void write_text(const std::string &path, const std::string &content);
std::string read_text(const std::string &path);

}  // namespace morkit::harness

#endif  // MORKIT_HARNESS_IO_HPP
