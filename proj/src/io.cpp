#include "lomem/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>

#include "lomem/error.hpp"

namespace lomem {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  s = s.substr(b, e - b + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

bool is_missing(std::string_view cell) {
  std::string lower(cell);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return lower.empty() || lower == "na" || lower == "nan" || lower == "null" || lower == "n/a";
}

bool parse_number(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const char* end = cell.data() + cell.size();
  const auto [ptr, ec] = std::from_chars(cell.data(), end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

}  // namespace

std::vector<double> read_csv_column(const std::string& path, const ColumnSelector& column) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);

  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(std::move(line));
  if (in.bad()) throw IoError("failed reading " + path);
  if (!lines.empty() && lines.front().starts_with("\xEF\xBB\xBF")) lines.front().erase(0, 3);
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  if (lines.empty()) throw EmptyInput(path + ": no rows");

  std::size_t index = 0;
  std::size_t first = 0;
  const auto header = split(lines.front());
  if (const auto* name = std::get_if<std::string>(&column)) {
    const auto it = std::find(header.begin(), header.end(), std::string_view(*name));
    if (it == header.end()) throw InvalidInput(path + ": no column named '" + *name + "'");
    index = static_cast<std::size_t>(it - header.begin());
    first = 1;
  } else {
    index = std::get<std::size_t>(column);
    double probe = 0.0;
    if (index < header.size() && !is_missing(header[index]) && !parse_number(header[index], probe)) {
      first = 1;
    }
  }

  std::vector<double> values;
  values.reserve(lines.size() - first);
  for (std::size_t r = first; r < lines.size(); ++r) {
    const auto cells = split(lines[r]);
    const std::size_t row = r + 1;
    if (index >= cells.size()) {
      throw ParseError(path + ": row " + std::to_string(row) + " has no column " +
                           std::to_string(index),
                       row);
    }
    const auto cell = cells[index];
    if (is_missing(cell)) {
      throw ParseError(path + ": missing value at row " + std::to_string(row), row);
    }
    double v = 0.0;
    if (!parse_number(cell, v)) {
      throw ParseError(path + ": non-numeric value '" + std::string(cell) + "' at row " +
                           std::to_string(row),
                       row);
    }
    values.push_back(v);
  }
  if (values.empty()) throw EmptyInput(path + ": selected column holds no observations");
  return values;
}

TimeSeries ingest_csv(const std::string& path, const ColumnSelector& column) {
  return TimeSeries(read_csv_column(path, column));
}

ColumnSelector parse_column_selector(std::string_view text) {
  std::size_t idx = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), idx);
  if (ec == std::errc() && ptr == text.data() + text.size() && !text.empty()) return idx;
  return std::string(text);
}

Transform parse_transform(std::string_view name) {
  if (name == "none") return Transform::None;
  if (name == "log-returns") return Transform::LogReturns;
  if (name == "first-difference") return Transform::FirstDifference;
  throw InvalidInput("unknown transform '" + std::string(name) + "'");
}

std::string to_string(Transform t) {
  switch (t) {
    case Transform::None: return "none";
    case Transform::LogReturns: return "log-returns";
    case Transform::FirstDifference: return "first-difference";
  }
  return "none";
}

std::vector<double> transform(std::span<const double> values, Transform op) {
  if (values.size() < 2) throw InvalidInput("transform requires at least two values");
  if (op == Transform::None) return {values.begin(), values.end()};
  std::vector<double> out(values.size() - 1);
  if (op == Transform::LogReturns) {
    for (double v : values) {
      if (!(v > 0.0)) throw DomainError("log-returns require strictly positive values");
    }
    for (std::size_t t = 0; t + 1 < values.size(); ++t) {
      out[t] = std::log(values[t + 1]) - std::log(values[t]);
    }
  } else {
    for (std::size_t t = 0; t + 1 < values.size(); ++t) out[t] = values[t + 1] - values[t];
  }
  return out;
}

TimeSeries transform(const TimeSeries& series, Transform op) {
  return TimeSeries(transform(series.values(), op));
}

}  // namespace lomem
