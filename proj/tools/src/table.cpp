#include "table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

namespace cwaft::cli {

namespace {

std::string at_line(std::size_t line) {
  return line == 0 ? std::string() : " (line " + std::to_string(line) + ")";
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_real(std::string_view field, std::string_view column, std::size_t line) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end || !std::isfinite(v))
    throw SchemaError("column '" + std::string(column) + "' holds '" + std::string(field) +
                          "', expected a finite real",
                      line);
  return v;
}

int parse_status(std::string_view field, std::size_t line) {
  int v = 0;
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (field.empty() || ec != std::errc() || ptr != end || v < 0)
    throw SchemaError("status '" + std::string(field) + "' is not a nonnegative integer", line);
  return v;
}

}  // namespace

SchemaError::SchemaError(const std::string& what, std::size_t line)
    : Error(what + at_line(line)), line_(line) {}

NonPositiveTime::NonPositiveTime(std::size_t line)
    : Error("time must be positive" + at_line(line)), line_(line) {}

Table parse_table(std::string_view text, bool standardize, int n_causes) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    auto nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw EmptyFile("input has no header");
  if (lines.size() == 1) throw EmptyFile("input has a header but no records");

  const auto header = split(lines.front());
  if (header.size() < 3 || header[0] != "time" || header[1] != "status")
    throw SchemaError("header must be time,status followed by at least one covariate", 1);
  std::vector<std::string> names;
  std::set<std::string_view> seen;
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c].empty()) throw SchemaError("empty covariate name", 1);
    if (!seen.insert(header[c]).second)
      throw SchemaError("duplicate covariate '" + std::string(header[c]) + "'", 1);
    names.emplace_back(header[c]);
  }

  const auto d = static_cast<Eigen::Index>(names.size());
  std::vector<SurvivalRecord> records;
  records.reserve(lines.size() - 1);
  int max_label = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::size_t line_no = k + 1;
    const auto fields = split(lines[k]);
    if (fields.size() != header.size())
      throw SchemaError("expected " + std::to_string(header.size()) + " fields, found " +
                            std::to_string(fields.size()),
                        line_no);
    SurvivalRecord r;
    r.time = parse_real(fields[0], "time", line_no);
    if (!(r.time > 0.0)) throw NonPositiveTime(line_no);
    const int label = parse_status(fields[1], line_no);
    if (n_causes > 0 && label > n_causes)
      throw SchemaError("status " + std::to_string(label) + " exceeds the declared " +
                            std::to_string(n_causes) + " causes",
                        line_no);
    max_label = std::max(max_label, label);
    r.status = label == 0 ? Status::censored() : Status::failed(label);
    r.covariates.resize(d);
    for (Eigen::Index j = 0; j < d; ++j)
      r.covariates(j) = parse_real(fields[static_cast<std::size_t>(j) + 2],
                                   names[static_cast<std::size_t>(j)], line_no);
    records.push_back(std::move(r));
  }

  Table t{std::move(names), Dataset(std::move(records), n_causes), std::nullopt, {}};
  for (int g = 1; g <= t.data.causes(); ++g)
    if (t.data.n_failed(g) == 0)
      t.warnings.push_back("cause " + std::to_string(g) + " has no observed failures");
  if (standardize) {
    t.standardization = fit_standardization(t.data);
    t.data = apply_standardization(t.data, *t.standardization);
  }
  return t;
}

Table read_table(const std::filesystem::path& path, bool standardize, int n_causes) {
  return parse_table(read_file(path), standardize, n_causes);
}

Standardization fit_standardization(const Dataset& data) {
  if (data.size() < 2) throw InvalidArgument("standardization needs at least two records");
  const auto& x = data.covariates();
  const Eigen::RowVectorXd mean = x.colwise().mean();
  const Eigen::RowVectorXd sd =
      ((x.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(x.rows() - 1))
          .sqrt();
  Standardization s;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (!(sd(j) > 0.0))
      throw InvalidArgument("covariate " + std::to_string(j + 1) +
                            " is constant and cannot be standardized");
    s.center.push_back(mean(j));
    s.scale.push_back(sd(j));
  }
  return s;
}

Dataset apply_standardization(const Dataset& data, const Standardization& s) {
  const auto d = static_cast<std::size_t>(data.dim());
  if (s.center.size() != d || s.scale.size() != d)
    throw DimensionMismatch("standardization does not match the covariate count");
  std::vector<SurvivalRecord> out(data.records().begin(), data.records().end());
  for (auto& r : out)
    for (std::size_t j = 0; j < d; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      r.covariates(jj) = (r.covariates(jj) - s.center[j]) / s.scale[j];
    }
  return Dataset(std::move(out), data.causes());
}

std::string format_double(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

void write_table(std::ostream& out, const Dataset& data, std::span<const std::string> covariates) {
  if (covariates.size() != static_cast<std::size_t>(data.dim()))
    throw DimensionMismatch("covariate names do not match the data dimension");
  out << "time,status";
  for (const auto& n : covariates) out << ',' << n;
  out << '\n';
  for (const auto& r : data.records()) {
    out << format_double(r.time) << ',' << r.status.code();
    for (Eigen::Index j = 0; j < r.covariates.size(); ++j)
      out << ',' << format_double(r.covariates(j));
    out << '\n';
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw InvalidArgument("failed writing '" + path.string() + "'");
}

}  // namespace cwaft::cli
