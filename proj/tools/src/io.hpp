#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "genum/dataset.hpp"

namespace genum::cli {

enum class InputFormat { Values, ValueFreq };

/// Accepts "values" and "value-freq"; throws Error(ParseError) otherwise.
InputFormat parse_format(std::string_view name);

/// Parses newline-delimited text. Lines starting with '#' and blank lines are
/// skipped. Throws Error(ParseError) with the 1-based line number as index,
/// Error(NonFiniteValue) for inf/nan, Error(EmptyInput) when nothing is left.
DataSet parse_dataset(std::string_view text, InputFormat format);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double x);

/// Lowercase hex SHA-256.
std::string sha256_hex(std::string_view bytes);

}  // namespace genum::cli
