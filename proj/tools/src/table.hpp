#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cwaft/error.hpp"
#include "cwaft/model.hpp"

namespace cwaft::cli {

// Malformed CSV content. line() is the 1-based line in the file (the header is
// line 1), or 0 when the problem is not tied to one line.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& what, std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class EmptyFile : public Error {
 public:
  using Error::Error;
};

class NonPositiveTime : public Error {
 public:
  explicit NonPositiveTime(std::size_t line);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// Per-covariate affine map x -> (x - center) / scale.
struct Standardization {
  std::vector<double> center;
  std::vector<double> scale;
};

struct Table {
  std::vector<std::string> covariates;
  Dataset data;
  std::optional<Standardization> standardization;
  // Human-readable notes, e.g. causes in 1..G without any observed failure.
  std::vector<std::string> warnings;
};

// Parses `time,status,<covariates...>`. n_causes = 0 infers G as the largest
// status label; a larger value declares causes that have no failures.
Table parse_table(std::string_view text, bool standardize, int n_causes = 0);
Table read_table(const std::filesystem::path& path, bool standardize, int n_causes = 0);

// Column means and sample standard deviations (divisor N - 1).
Standardization fit_standardization(const Dataset& data);
Dataset apply_standardization(const Dataset& data, const Standardization& s);

// Shortest decimal text that reads back to exactly `value`.
std::string format_double(double value);

void write_table(std::ostream& out, const Dataset& data, std::span<const std::string> covariates);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace cwaft::cli
