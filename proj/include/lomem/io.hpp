#ifndef LOMEM_IO_HPP
#define LOMEM_IO_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lomem/spectral.hpp"

namespace lomem {

/// Column of a CSV file, by zero-based index or by header name.
using ColumnSelector = std::variant<std::size_t, std::string>;

/// Reads one numeric column. The first row is taken as a header when its
/// selected cell is not a number (selecting by name requires one). Missing
/// cells ("", NA, NaN, null) and non-numeric cells raise ParseError carrying
/// the one-based line number; an unreadable file raises IoError and a column
/// without observations EmptyInput.
std::vector<double> read_csv_column(const std::string& path, const ColumnSelector& column = std::size_t{0});

/// read_csv_column wrapped as a series (n >= 4).
TimeSeries ingest_csv(const std::string& path, const ColumnSelector& column = std::size_t{0});

/// Interprets "3" as index 3 and anything else as a header name.
ColumnSelector parse_column_selector(std::string_view text);

enum class Transform { None, LogReturns, FirstDifference };

/// "none", "log-returns", "first-difference"
Transform parse_transform(std::string_view name);
std::string to_string(Transform t);

/// Output has n - 1 values except for None. Requires n >= 2; log-returns
/// require every value > 0 (DomainError otherwise).
std::vector<double> transform(std::span<const double> values, Transform op);
TimeSeries transform(const TimeSeries& series, Transform op);

}  // namespace lomem

#endif  // LOMEM_IO_HPP
