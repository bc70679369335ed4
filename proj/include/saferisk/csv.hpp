#pragma once

// Minimal CSV reading helpers shared by the file formats of this library.
// Lines starting with '#' are comments; blank lines are skipped.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace saferisk::csv {

struct Line
{
  std::size_t number; // 1-based line number in the source
  std::string text;
};

struct Document
{
  std::vector<std::string> comments; // comment lines without the leading '#'
  std::vector<Line> lines;           // non-comment, non-blank lines
};

/// Reads a whole file. Throws IoError when the file cannot be read.
std::string read_file(const std::filesystem::path& path);

/// Writes text to path, or throws IoError.
void write_file(const std::filesystem::path& path, std::string_view text);

Document parse_document(std::string_view text);

/// Splits one record on commas. Double-quoted fields may contain commas and
/// doubled quotes. Surrounding whitespace of unquoted fields is trimmed.
std::vector<std::string> split(std::string_view line);

/// Quotes a field when it contains a comma, quote or leading/trailing space.
std::string escape(std::string_view field);

bool parse_double(std::string_view text, double& out);
bool parse_uint(std::string_view text, std::uint64_t& out);

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

/// 64-bit FNV-1a digest, used to fingerprint input files in output headers.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::uint64_t digest);

/// A numeric table: header names and one column vector per name.
struct Table
{
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> comments;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of a named column, or npos.
  std::size_t find(std::string_view name) const;
};

/// Parses a header + numeric rows file. Throws ValidationError on malformed rows.
Table parse_numeric_table(std::string_view text, std::string_view source);

} // namespace saferisk::csv
