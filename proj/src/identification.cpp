#include "apronid/identification.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "apronid/error.hpp"

namespace apronid {

TypeDatabase::TypeDatabase(std::vector<AircraftType> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw Error(ErrorCode::ParseError, "type database has no entries");
  std::set<std::string, std::less<>> seen;
  for (const AircraftType& t : entries_) {
    if (!seen.insert(t.code).second) {
      throw Error(ErrorCode::DuplicateCode, "duplicate type code '" + t.code + "'");
    }
    if (!std::isfinite(t.actual_length_m) || t.actual_length_m <= 0.0) {
      throw Error(ErrorCode::NonPositiveLength, "type '" + t.code + "' has non-positive length");
    }
  }
  sorted_ = entries_;
  std::sort(sorted_.begin(), sorted_.end(), [](const AircraftType& a, const AircraftType& b) {
    if (a.actual_length_m != b.actual_length_m) return a.actual_length_m < b.actual_length_m;
    return a.code < b.code;
  });
}

const TypeDatabase& TypeDatabase::builtin() {
  static const TypeDatabase db({
      {"LM100J", "Lockheed-Martin-LM100J", 35.0},
      {"G-280", "GULFSTREAM-G-280", 20.0},
      {"G-550", "GULFSTREAM-G-550", 29.0},
      {"G-650", "GULFSTREAM-G-650", 30.0},
      {"CJ4", "Cessna-Citation CJ4", 16.0},
      {"CM2", "Cessna-Citation M2", 13.0},
      {"Bo787", "Boeing 787-8", 57.0},
      {"A-380", "Airbus A-380", 73.0},
      {"A-320", "Airbus A-320", 38.0},
  });
  return db;
}

std::optional<std::size_t> TypeDatabase::index_of(std::string_view code) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].code == code) return i;
  }
  return std::nullopt;
}

const AircraftType* TypeDatabase::find(std::string_view code) const {
  const auto i = index_of(code);
  return i ? &entries_[*i] : nullptr;
}

const AircraftType& nearest_type(double length_m, const TypeDatabase& db) {
  const auto sorted = db.by_length();
  const AircraftType* best = &sorted.front();
  double best_gap = std::abs(length_m - best->actual_length_m);
  // Strict improvement only, so the earlier (shorter) entry keeps ties.
  for (const AircraftType& t : sorted.subspan(1)) {
    const double gap = std::abs(length_m - t.actual_length_m);
    if (gap < best_gap) {
      best = &t;
      best_gap = gap;
    }
  }
  return *best;
}

std::string classify_by_length(double length_m, const TypeDatabase& db) {
  return nearest_type(length_m, db).code;
}

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_csv_row(std::string_view line, std::string_view source,
                                       std::size_t line_no) {
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool was_quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
      was_quoted = true;
    } else if (c == ',') {
      fields.push_back(was_quoted ? field : trim(field));
      field.clear();
      was_quoted = false;
    } else {
      field += c;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(line_no) +
                                           ": unterminated quoted field");
  }
  fields.push_back(was_quoted ? field : trim(field));
  return fields;
}

}  // namespace

TypeDatabase parse_type_db(std::string_view text, std::string_view source) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<AircraftType> entries;
  std::set<std::string, std::less<>> seen;
  bool header_seen = false;
  std::size_t line_no = 0;
  const std::string where(source);

  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.ends_with('\r')) line.remove_suffix(1);
    if (trim(line).empty()) continue;

    const auto context = where + ":" + std::to_string(line_no) + ": ";
    const std::vector<std::string> fields = split_csv_row(line, source, line_no);
    if (!header_seen) {
      if (fields != std::vector<std::string>{"code", "full_name", "actual_length_m"}) {
        throw Error(ErrorCode::ParseError,
                    context + "expected header 'code,full_name,actual_length_m'");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 3) {
      throw Error(ErrorCode::ParseError,
                  context + "expected 3 fields, found " + std::to_string(fields.size()));
    }
    if (fields[0].empty()) throw Error(ErrorCode::ParseError, context + "empty type code");

    double length = 0.0;
    const std::string& raw = fields[2];
    const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), length);
    if (ec != std::errc{} || ptr != raw.data() + raw.size()) {
      throw Error(ErrorCode::ParseError, context + "invalid length '" + raw + "'");
    }
    if (!std::isfinite(length) || length <= 0.0) {
      throw Error(ErrorCode::NonPositiveLength, context + "length must be positive");
    }
    if (!seen.insert(fields[0]).second) {
      throw Error(ErrorCode::DuplicateCode, context + "duplicate type code '" + fields[0] + "'");
    }
    entries.push_back({fields[0], fields[1], length});
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, where + ": missing header row");
  if (entries.empty()) throw Error(ErrorCode::ParseError, where + ": no type rows");
  return TypeDatabase(std::move(entries));
}

TypeDatabase load_type_db(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open type database " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_type_db(buffer.str(), path.string());
}

TypeDatabase load_type_db(const std::optional<std::filesystem::path>& path) {
  return path ? load_type_db(*path) : TypeDatabase::builtin();
}

}  // namespace apronid
