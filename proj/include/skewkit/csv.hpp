#pragma once

// Canonical engagement ledger CSV.
//
//   date,campaign_id,targeting,label,impressions,clicks,conversions,spend
//
// Ingest is lenient about rows that break ledger invariants (they are kept
// and reported as warnings) and strict about everything else.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "skewkit/core.hpp"

namespace skewkit {

inline constexpr std::string_view kCsvHeader =
    "date,campaign_id,targeting,label,impressions,clicks,conversions,spend";

/// Missing or renamed columns, or a value that does not parse.
struct CsvSchemaError : std::runtime_error {
  CsvSchemaError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

/// The file could not be opened or read.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IngestWarning {
  std::size_t line = 0;  // 1-based, header is line 1
  Violation violation = Violation::ClicksExceedImpressions;

  std::string message() const;
};

struct IngestResult {
  std::vector<EngagementRecord> records;
  std::vector<IngestWarning> warnings;
};

IngestResult parse_csv(std::istream& in);
IngestResult ingest_csv(const std::filesystem::path& path);

std::string format_row(const EngagementRecord& record);
void write_csv(std::ostream& out, std::span<const EngagementRecord> records);
void write_csv(const std::filesystem::path& path, std::span<const EngagementRecord> records);

}  // namespace skewkit
