#include "saferisk/csv.hpp"

#include "saferisk/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

namespace saferisk::csv {

namespace {

std::string_view trim(std::string_view s)
{
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

} // namespace

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad())
    throw IoError("error while reading '" + path.string() + "'");
  return text;
}

void write_file(const std::filesystem::path& path, std::string_view text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw IoError("error while writing '" + path.string() + "'");
}

Document parse_document(std::string_view text)
{
  Document doc;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    auto raw = text.substr(pos, end - pos);
    ++number;
    if (!raw.empty() && raw.back() == '\r')
      raw.remove_suffix(1);
    // strip a UTF-8 byte order mark on the first line
    if (number == 1 && raw.starts_with("\xEF\xBB\xBF"))
      raw.remove_prefix(3);
    auto t = trim(raw);
    if (!t.empty()) {
      if (t.front() == '#')
        doc.comments.emplace_back(trim(t.substr(1)));
      else
        doc.lines.push_back({ number, std::string(raw) });
    }
    if (end == text.size())
      break;
    pos = end + 1;
  }
  return doc;
}

std::vector<std::string> split(std::string_view line)
{
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : std::string(trim(field)));
      field.clear();
      was_quoted = false;
    } else {
      field.push_back(c);
    }
  }
  fields.push_back(was_quoted ? field : std::string(trim(field)));
  return fields;
}

std::string escape(std::string_view field)
{
  bool needs = field.find_first_of(",\"") != std::string_view::npos ||
               (!field.empty() && (std::isspace(static_cast<unsigned char>(field.front())) ||
                                   std::isspace(static_cast<unsigned char>(field.back()))));
  if (!needs)
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"')
      out += "\"\"";
    else
      out.push_back(c);
  }
  out.push_back('"');
  return out;
}

bool parse_double(std::string_view text, double& out)
{
  text = trim(text);
  if (!text.empty() && text.front() == '+')
    text.remove_prefix(1);
  if (text.empty())
    return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_uint(std::string_view text, std::uint64_t& out)
{
  text = trim(text);
  if (text.empty())
    return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

std::string format_double(double value)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc())
    throw Error("cannot format number");
  return std::string(buf, ptr);
}

std::uint64_t fnv1a64(std::string_view bytes)
{
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex_digest(std::uint64_t digest)
{
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << digest;
  return os.str();
}

std::size_t Table::find(std::string_view name) const
{
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  return static_cast<std::size_t>(-1);
}

Table parse_numeric_table(std::string_view text, std::string_view source)
{
  auto doc = parse_document(text);
  if (doc.lines.empty())
    throw ValidationError(std::string(source) + ": empty file");
  Table table;
  table.comments = std::move(doc.comments);
  table.header = split(doc.lines.front().text);
  table.columns.resize(table.header.size());
  for (std::size_t r = 1; r < doc.lines.size(); ++r) {
    const auto& line = doc.lines[r];
    auto fields = split(line.text);
    if (fields.size() != table.header.size())
      throw ValidationError(std::string(source) + ":" + std::to_string(line.number) +
                            ": expected " + std::to_string(table.header.size()) +
                            " fields, found " + std::to_string(fields.size()));
    for (std::size_t c = 0; c < fields.size(); ++c) {
      double v = 0;
      if (!parse_double(fields[c], v))
        throw ValidationError(std::string(source) + ":" + std::to_string(line.number) +
                              ": not a number: '" + fields[c] + "'");
      table.columns[c].push_back(v);
    }
  }
  return table;
}

} // namespace saferisk::csv
