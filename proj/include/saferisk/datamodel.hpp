#pragma once

// Domain types for attribute catalogs and report matrices, with CSV ingestion.
//
// Catalog CSV header:
//   name,report_count,exposure_pct,real_s1..real_s5,worst_s1..worst_s5
// An optional comment line `# severity_scores=a,b,c,d,e` attaches a severity
// scale to the file (see load_catalog).
//
// Matrix CSV: a header of attribute names followed by rows of 0/1 cells.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace saferisk {

enum class Basis
{
  real,
  worst
};

std::string_view to_string(Basis basis);
/// Accepts "real" or "worst"; throws ValidationError otherwise.
Basis parse_basis(std::string_view text);

inline constexpr std::size_t kSeverityLevels = 5;
using SeverityCounts = std::array<std::uint32_t, kSeverityLevels>;

/// Impact scores for Pain, First Aid, Medical Case/Lost Work Time,
/// Permanent Disablement and Fatality.
class SeverityScale
{
public:
  /// The standard scores (12, 48, 192, 1024, 26214).
  SeverityScale();
  /// Throws ValidationError unless the scores are positive and strictly increasing.
  explicit SeverityScale(const std::array<double, kSeverityLevels>& scores);

  const std::array<double, kSeverityLevels>& scores() const { return scores_; }
  double operator[](std::size_t level) const { return scores_[level]; }

  SeverityScale scaled(double factor) const;
  bool is_default() const;

  bool operator==(const SeverityScale&) const = default;

private:
  std::array<double, kSeverityLevels> scores_;
};

/// Parses "a,b,c,d,e" into a scale.
SeverityScale parse_severity_scale(std::string_view text);
std::string format_severity_scale(const SeverityScale& scale);

struct AttributeRecord
{
  std::string name;
  std::uint32_t report_count = 0;
  double exposure = 1.0; // fraction in (0, 1]
  SeverityCounts real{};
  SeverityCounts worst{};

  const SeverityCounts& counts(Basis basis) const
  {
    return basis == Basis::real ? real : worst;
  }

  bool operator==(const AttributeRecord&) const = default;
};

/// Throws ValidationError when exposure is outside (0, 1] or a count vector
/// does not sum to report_count.
void validate(const AttributeRecord& record);

class AttributeCatalog
{
public:
  /// Validates every record; names must be unique and the list non-empty.
  AttributeCatalog(std::vector<AttributeRecord> records, SeverityScale scale = {});

  std::span<const AttributeRecord> records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  const AttributeRecord& operator[](std::size_t i) const { return records_[i]; }
  const SeverityScale& scale() const { return scale_; }

  std::optional<std::size_t> find(std::string_view name) const;

  bool operator==(const AttributeCatalog& other) const
  {
    return records_ == other.records_ && scale_ == other.scale_;
  }

private:
  std::vector<AttributeRecord> records_;
  SeverityScale scale_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// R x P binary matrix of attribute presence per report.
class ReportMatrix
{
public:
  /// `cells` is row-major with rows * column_names.size() entries. Throws
  /// ValidationError on non-binary cells or an all-zero row.
  ReportMatrix(std::vector<std::string> column_names,
               std::vector<std::uint8_t> cells,
               std::size_t dropped_empty_rows = 0);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return column_names_.size(); }
  std::span<const std::string> column_names() const { return column_names_; }
  std::span<const std::uint8_t> row(std::size_t r) const
  {
    return { cells_.data() + r * cols(), cols() };
  }
  std::uint8_t at(std::size_t r, std::size_t c) const { return cells_[r * cols() + c]; }
  /// Number of attribute-less rows discarded by a lenient parse.
  std::size_t dropped_empty_rows() const { return dropped_; }

  bool operator==(const ReportMatrix& other) const
  {
    return column_names_ == other.column_names_ && cells_ == other.cells_;
  }

private:
  std::vector<std::string> column_names_;
  std::vector<std::uint8_t> cells_;
  std::size_t rows_ = 0;
  std::size_t dropped_ = 0;
};

AttributeCatalog parse_catalog(const std::filesystem::path& path, const SeverityScale& scale);
AttributeCatalog parse_catalog_text(std::string_view text,
                                    const SeverityScale& scale,
                                    std::string_view source = "<catalog>");

/// The `# severity_scores=` directive of a catalog file, if present.
std::optional<SeverityScale> scale_directive(std::string_view text);

/// Parses a catalog using `override_scale` if given, else the file's own
/// directive, else the standard scale.
AttributeCatalog load_catalog(const std::filesystem::path& path,
                              const std::optional<SeverityScale>& override_scale = std::nullopt);

/// Writes the catalog CSV; a non-standard scale is emitted as a directive.
std::string serialize_catalog(const AttributeCatalog& catalog);

/// In strict mode an all-zero row is an error; otherwise such rows are dropped
/// and counted in ReportMatrix::dropped_empty_rows().
ReportMatrix parse_report_matrix(const std::filesystem::path& path,
                                 const AttributeCatalog& catalog,
                                 bool strict = true);
ReportMatrix parse_report_matrix_text(std::string_view text,
                                      const AttributeCatalog& catalog,
                                      bool strict = true,
                                      std::string_view source = "<matrix>");

std::string serialize_report_matrix(const ReportMatrix& matrix,
                                    std::span<const std::string> comments = {});

/// Synthetic report matrix: each report holds 1 to 5 distinct attributes
/// drawn with probability proportional to their report_count. Deterministic
/// for a given seed.
ReportMatrix generate_demo_matrix(const AttributeCatalog& catalog,
                                  std::size_t n_reports,
                                  std::uint64_t seed);

/// The bundled demo catalog: reference attribute names, counts and exposures
/// with a synthetic per-severity split.
std::string_view demo_catalog_csv();
AttributeCatalog demo_catalog();

} // namespace saferisk
