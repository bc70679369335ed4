#include "saferisk/datamodel.hpp"

#include "saferisk/csv.hpp"
#include "saferisk/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>

namespace saferisk {

namespace {

constexpr std::array<std::string_view, 13> kCatalogHeader = {
  "name",    "report_count", "exposure_pct", "real_s1",  "real_s2",
  "real_s3", "real_s4",      "real_s5",      "worst_s1", "worst_s2",
  "worst_s3", "worst_s4",    "worst_s5"
};

constexpr std::string_view kScaleDirective = "severity_scores=";

std::string at_line(std::string_view source, std::size_t line)
{
  return std::string(source) + ":" + std::to_string(line) + ": ";
}

// Shortest percent string whose value / 100 gives back `exposure` exactly.
std::string format_percent(double exposure)
{
  for (int digits = 1; digits <= 17; ++digits) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, exposure * 100.0);
    double back = 0;
    if (csv::parse_double(buf, back) && back / 100.0 == exposure)
      return buf;
  }
  return csv::format_double(exposure * 100.0);
}

} // namespace

std::string_view to_string(Basis basis)
{
  return basis == Basis::real ? "real" : "worst";
}

Basis parse_basis(std::string_view text)
{
  if (text == "real")
    return Basis::real;
  if (text == "worst")
    return Basis::worst;
  throw ValidationError("unknown basis '" + std::string(text) + "' (expected real or worst)");
}

SeverityScale::SeverityScale()
  : scores_{ 12.0, 48.0, 192.0, 1024.0, 26214.0 }
{
}

SeverityScale::SeverityScale(const std::array<double, kSeverityLevels>& scores)
  : scores_(scores)
{
  for (std::size_t s = 0; s < kSeverityLevels; ++s) {
    if (!(std::isfinite(scores_[s]) && scores_[s] > 0))
      throw ValidationError("severity scores must be positive");
    if (s > 0 && !(scores_[s] > scores_[s - 1]))
      throw ValidationError("severity scores must be strictly increasing");
  }
}

SeverityScale SeverityScale::scaled(double factor) const
{
  auto s = scores_;
  for (auto& v : s)
    v *= factor;
  return SeverityScale(s);
}

bool SeverityScale::is_default() const
{
  return *this == SeverityScale{};
}

SeverityScale parse_severity_scale(std::string_view text)
{
  auto fields = csv::split(text);
  if (fields.size() != kSeverityLevels)
    throw ValidationError("severity scale needs exactly 5 scores, got " +
                          std::to_string(fields.size()));
  std::array<double, kSeverityLevels> scores{};
  for (std::size_t s = 0; s < kSeverityLevels; ++s)
    if (!csv::parse_double(fields[s], scores[s]))
      throw ValidationError("bad severity score '" + fields[s] + "'");
  return SeverityScale(scores);
}

std::string format_severity_scale(const SeverityScale& scale)
{
  std::string out;
  for (std::size_t s = 0; s < kSeverityLevels; ++s) {
    if (s)
      out += ',';
    out += csv::format_double(scale[s]);
  }
  return out;
}

void validate(const AttributeRecord& record)
{
  if (record.name.empty())
    throw ValidationError("attribute with empty name");
  if (!(record.exposure > 0.0 && record.exposure <= 1.0))
    throw ValidationError("attribute '" + record.name + "': exposure must be in (0, 1]");
  auto sum = [](const SeverityCounts& c) {
    return std::accumulate(c.begin(), c.end(), std::uint64_t{ 0 });
  };
  if (sum(record.real) != record.report_count)
    throw ValidationError("attribute '" + record.name +
                          "': real severity counts do not sum to report_count");
  if (sum(record.worst) != record.report_count)
    throw ValidationError("attribute '" + record.name +
                          "': worst severity counts do not sum to report_count");
}

AttributeCatalog::AttributeCatalog(std::vector<AttributeRecord> records, SeverityScale scale)
  : records_(std::move(records))
  , scale_(scale)
{
  if (records_.empty())
    throw ValidationError("empty catalog");
  for (std::size_t i = 0; i < records_.size(); ++i) {
    validate(records_[i]);
    if (!index_.emplace(records_[i].name, i).second)
      throw ValidationError("duplicate attribute name '" + records_[i].name + "'");
  }
}

std::optional<std::size_t> AttributeCatalog::find(std::string_view name) const
{
  auto it = index_.find(std::string(name));
  if (it == index_.end())
    return std::nullopt;
  return it->second;
}

ReportMatrix::ReportMatrix(std::vector<std::string> column_names,
                           std::vector<std::uint8_t> cells,
                           std::size_t dropped_empty_rows)
  : column_names_(std::move(column_names))
  , cells_(std::move(cells))
  , dropped_(dropped_empty_rows)
{
  if (column_names_.empty())
    throw ValidationError("report matrix without columns");
  if (cells_.size() % column_names_.size() != 0)
    throw ValidationError("report matrix cell count is not a multiple of the column count");
  rows_ = cells_.size() / column_names_.size();
  for (auto c : cells_)
    if (c > 1)
      throw ValidationError("non-binary cell");
  for (std::size_t r = 0; r < rows_; ++r) {
    auto cells = row(r);
    if (std::none_of(cells.begin(), cells.end(), [](auto c) { return c != 0; }))
      throw ValidationError("report " + std::to_string(r) + ": report with no attributes");
  }
}

std::optional<SeverityScale> scale_directive(std::string_view text)
{
  auto doc = csv::parse_document(text);
  for (const auto& comment : doc.comments) {
    std::string_view c = comment;
    if (c.starts_with(kScaleDirective))
      return parse_severity_scale(c.substr(kScaleDirective.size()));
  }
  return std::nullopt;
}

AttributeCatalog parse_catalog_text(std::string_view text,
                                    const SeverityScale& scale,
                                    std::string_view source)
{
  auto doc = csv::parse_document(text);
  if (doc.lines.empty())
    throw ValidationError(std::string(source) + ": empty catalog");

  auto header = csv::split(doc.lines.front().text);
  if (header.size() != kCatalogHeader.size() ||
      !std::equal(header.begin(), header.end(), kCatalogHeader.begin()))
    throw ValidationError(at_line(source, doc.lines.front().number) +
                          "catalog header does not match the expected schema");

  std::vector<AttributeRecord> records;
  for (std::size_t i = 1; i < doc.lines.size(); ++i) {
    const auto& line = doc.lines[i];
    auto where = at_line(source, line.number);
    auto fields = csv::split(line.text);
    if (fields.size() != kCatalogHeader.size())
      throw ValidationError(where + "malformed row: expected " +
                            std::to_string(kCatalogHeader.size()) + " fields, found " +
                            std::to_string(fields.size()));
    AttributeRecord rec;
    rec.name = fields[0];
    std::uint64_t n = 0;
    if (!csv::parse_uint(fields[1], n) || n > UINT32_MAX)
      throw ValidationError(where + "malformed row: bad report_count '" + fields[1] + "'");
    rec.report_count = static_cast<std::uint32_t>(n);
    double pct = 0;
    if (!csv::parse_double(fields[2], pct))
      throw ValidationError(where + "malformed row: bad exposure_pct '" + fields[2] + "'");
    if (!(pct > 0.0 && pct <= 100.0))
      throw ValidationError(where + "exposure_pct must be in (0, 100], got " + fields[2]);
    rec.exposure = pct / 100.0;
    for (std::size_t s = 0; s < kSeverityLevels; ++s) {
      std::uint64_t real = 0, worst = 0;
      if (!csv::parse_uint(fields[3 + s], real) || real > UINT32_MAX)
        throw ValidationError(where + "malformed row: bad count '" + fields[3 + s] + "'");
      if (!csv::parse_uint(fields[8 + s], worst) || worst > UINT32_MAX)
        throw ValidationError(where + "malformed row: bad count '" + fields[8 + s] + "'");
      rec.real[s] = static_cast<std::uint32_t>(real);
      rec.worst[s] = static_cast<std::uint32_t>(worst);
    }
    try {
      validate(rec);
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    records.push_back(std::move(rec));
  }
  if (records.empty())
    throw ValidationError(std::string(source) + ": empty catalog");
  return AttributeCatalog(std::move(records), scale);
}

AttributeCatalog parse_catalog(const std::filesystem::path& path, const SeverityScale& scale)
{
  return parse_catalog_text(csv::read_file(path), scale, path.string());
}

AttributeCatalog load_catalog(const std::filesystem::path& path,
                              const std::optional<SeverityScale>& override_scale)
{
  auto text = csv::read_file(path);
  SeverityScale scale = override_scale ? *override_scale
                                       : scale_directive(text).value_or(SeverityScale{});
  return parse_catalog_text(text, scale, path.string());
}

std::string serialize_catalog(const AttributeCatalog& catalog)
{
  std::ostringstream os;
  if (!catalog.scale().is_default())
    os << "# " << kScaleDirective << format_severity_scale(catalog.scale()) << '\n';
  for (std::size_t i = 0; i < kCatalogHeader.size(); ++i)
    os << (i ? "," : "") << kCatalogHeader[i];
  os << '\n';
  for (const auto& rec : catalog.records()) {
    os << csv::escape(rec.name) << ',' << rec.report_count << ',' << format_percent(rec.exposure);
    for (auto c : rec.real)
      os << ',' << c;
    for (auto c : rec.worst)
      os << ',' << c;
    os << '\n';
  }
  return os.str();
}

ReportMatrix parse_report_matrix_text(std::string_view text,
                                      const AttributeCatalog& catalog,
                                      bool strict,
                                      std::string_view source)
{
  auto doc = csv::parse_document(text);
  if (doc.lines.empty())
    throw ValidationError(std::string(source) + ": empty report matrix");
  auto names = csv::split(doc.lines.front().text);
  std::vector<std::string> unknown;
  for (const auto& n : names)
    if (!catalog.find(n))
      unknown.push_back(n);
  if (!unknown.empty()) {
    std::string list;
    for (const auto& n : unknown)
      list += (list.empty() ? "'" : ", '") + n + "'";
    throw ValidationError(at_line(source, doc.lines.front().number) +
                          "unknown column name(s): " + list);
  }
  {
    auto sorted = names;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw ValidationError(at_line(source, doc.lines.front().number) + "duplicate column name");
  }

  std::vector<std::uint8_t> cells;
  std::size_t dropped = 0;
  for (std::size_t i = 1; i < doc.lines.size(); ++i) {
    const auto& line = doc.lines[i];
    auto fields = csv::split(line.text);
    if (fields.size() != names.size())
      throw ValidationError(at_line(source, line.number) + "expected " +
                            std::to_string(names.size()) + " cells, found " +
                            std::to_string(fields.size()));
    std::vector<std::uint8_t> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      if (f == "0")
        row.push_back(0);
      else if (f == "1")
        row.push_back(1);
      else
        throw ValidationError(at_line(source, line.number) + "non-binary cell '" + f + "'");
    }
    if (std::none_of(row.begin(), row.end(), [](auto c) { return c != 0; })) {
      if (strict)
        throw ValidationError(at_line(source, line.number) + "report with no attributes");
      ++dropped;
      continue;
    }
    cells.insert(cells.end(), row.begin(), row.end());
  }
  return ReportMatrix(std::move(names), std::move(cells), dropped);
}

ReportMatrix parse_report_matrix(const std::filesystem::path& path,
                                 const AttributeCatalog& catalog,
                                 bool strict)
{
  return parse_report_matrix_text(csv::read_file(path), catalog, strict, path.string());
}

std::string serialize_report_matrix(const ReportMatrix& matrix,
                                    std::span<const std::string> comments)
{
  std::ostringstream os;
  for (const auto& c : comments)
    os << "# " << c << '\n';
  auto names = matrix.column_names();
  for (std::size_t c = 0; c < names.size(); ++c)
    os << (c ? "," : "") << csv::escape(names[c]);
  os << '\n';
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    auto row = matrix.row(r);
    for (std::size_t c = 0; c < row.size(); ++c)
      os << (c ? "," : "") << static_cast<int>(row[c]);
    os << '\n';
  }
  return os.str();
}

ReportMatrix generate_demo_matrix(const AttributeCatalog& catalog,
                                  std::size_t n_reports,
                                  std::uint64_t seed)
{
  if (n_reports == 0)
    throw ValidationError("n_reports must be at least 1");

  const std::size_t p = catalog.size();
  std::vector<double> base_weights(p);
  for (std::size_t j = 0; j < p; ++j)
    base_weights[j] = catalog[j].report_count;
  std::size_t positive = std::count_if(base_weights.begin(), base_weights.end(),
                                       [](double w) { return w > 0; });
  if (positive == 0) {
    std::fill(base_weights.begin(), base_weights.end(), 1.0);
    positive = p;
  }
  const std::size_t max_k = std::min<std::size_t>(5, positive);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_k(1, max_k);
  std::vector<std::uint8_t> cells(n_reports * p, 0);
  std::vector<double> weights;
  for (std::size_t r = 0; r < n_reports; ++r) {
    weights = base_weights;
    const std::size_t k = pick_k(rng);
    for (std::size_t j = 0; j < k; ++j) {
      std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
      auto a = pick(rng);
      cells[r * p + a] = 1;
      weights[a] = 0.0;
    }
  }
  std::vector<std::string> names;
  names.reserve(p);
  for (const auto& rec : catalog.records())
    names.push_back(rec.name);
  return ReportMatrix(std::move(names), std::move(cells));
}

AttributeCatalog demo_catalog()
{
  auto text = demo_catalog_csv();
  return parse_catalog_text(text, scale_directive(text).value_or(SeverityScale{}), "table1_demo.csv");
}

} // namespace saferisk
