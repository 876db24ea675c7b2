#include "skewkit/csv.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>

namespace skewkit {

namespace {

constexpr std::array<std::string_view, 8> kColumns = {
    "date", "campaign_id", "targeting", "label", "impressions", "clicks", "conversions", "spend"};

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

// Digits only, no leading zeros, no sign.
std::optional<std::uint64_t> parse_count(std::string_view s) {
  if (s.empty() || (s.size() > 1 && s.front() == '0')) return std::nullopt;
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Refunds show up as negative spend in real exports, so a leading minus is
// accepted here and flagged later by validate_record.
std::optional<Cents> parse_spend(std::string_view s) {
  if (!s.empty() && s.front() == '-') {
    auto mag = Cents::parse(s.substr(1));
    if (!mag || mag->value() == 0) return std::nullopt;
    return Cents{-mag->value()};
  }
  return Cents::parse(s);
}

std::string_view chomp(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

std::string IngestWarning::message() const {
  return "line " + std::to_string(line) + ": " + std::string(to_string(violation));
}

IngestResult parse_csv(std::istream& in) {
  std::string raw;
  if (!std::getline(in, raw)) throw CsvSchemaError(1, "empty file, expected header");
  std::string_view header = chomp(raw);
  if (header.substr(0, 3) == "\xEF\xBB\xBF") header.remove_prefix(3);

  // Column position by name; any order is accepted.
  std::array<std::size_t, kColumns.size()> pos{};
  pos.fill(SIZE_MAX);
  const auto names = split(header);
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::size_t k = 0;
    while (k < kColumns.size() && kColumns[k] != names[i]) ++k;
    if (k == kColumns.size())
      throw CsvSchemaError(1, "unexpected column '" + std::string(names[i]) + "'");
    if (pos[k] != SIZE_MAX) throw CsvSchemaError(1, "duplicate column '" + std::string(names[i]) + "'");
    pos[k] = i;
  }
  std::string missing;
  for (std::size_t k = 0; k < kColumns.size(); ++k)
    if (pos[k] == SIZE_MAX) missing += (missing.empty() ? "" : ", ") + std::string(kColumns[k]);
  if (!missing.empty()) throw CsvSchemaError(1, "missing column(s): " + missing);

  IngestResult result;
  std::size_t line_no = 1;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = chomp(raw);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != kColumns.size())
      throw CsvSchemaError(line_no, "expected " + std::to_string(kColumns.size()) + " fields, got " +
                                        std::to_string(f.size()));
    auto field = [&](std::size_t k) { return f[pos[k]]; };
    auto bad = [&](std::size_t k, std::string_view what) {
      return CsvSchemaError(line_no, std::string(kColumns[k]) + ": " + std::string(what) + " '" +
                                         std::string(field(k)) + "'");
    };

    EngagementRecord r;
    auto date = Date::parse(field(0));
    if (!date) throw bad(0, "not an ISO date");
    r.date = *date;
    r.campaign_id = std::string(field(1));
    if (r.campaign_id.empty()) throw bad(1, "empty");
    if (r.campaign_id.find('"') != std::string::npos) throw bad(1, "quoted fields are not supported");
    auto targeting = parse_targeting(field(2));
    if (!targeting) throw bad(2, "unknown targeting");
    r.targeting = *targeting;
    auto label = parse_label(field(3));
    if (!label) throw bad(3, "unknown label");
    r.label = *label;
    std::uint64_t* counts[] = {&r.impressions, &r.clicks, &r.conversions};
    for (std::size_t k = 4; k < 7; ++k) {
      auto v = parse_count(field(k));
      if (!v) throw bad(k, "not a non-negative integer");
      *counts[k - 4] = *v;
    }
    auto spend = parse_spend(field(7));
    if (!spend) throw bad(7, "not a dollar amount with two decimals");
    r.spend = *spend;

    for (auto v : validate_record(r)) result.warnings.push_back({line_no, v});
    result.records.push_back(std::move(r));
  }
  if (in.bad()) throw IoError("read error");
  return result;
}

IngestResult ingest_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return parse_csv(in);
  } catch (const IoError&) {
    throw IoError("read error on " + path.string());
  }
}

std::string format_row(const EngagementRecord& r) {
  std::string s = r.date.str();
  s += ',';
  s += r.campaign_id;
  s += ',';
  s += to_string(r.targeting);
  s += ',';
  s += to_string(r.label);
  for (auto v : {r.impressions, r.clicks, r.conversions}) {
    s += ',';
    s += std::to_string(v);
  }
  s += ',';
  s += r.spend.str();
  return s;
}

void write_csv(std::ostream& out, std::span<const EngagementRecord> records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << format_row(r) << '\n';
}

void write_csv(const std::filesystem::path& path, std::span<const EngagementRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  write_csv(out, records);
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace skewkit
