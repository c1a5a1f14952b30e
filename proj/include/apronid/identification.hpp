#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace apronid {

struct AircraftType {
  std::string code;
  std::string full_name;
  double actual_length_m = 0.0;

  friend bool operator==(const AircraftType&, const AircraftType&) = default;
};

// Immutable table of known aircraft. entries() keeps the order the table was
// given in (this is the row/column order of confusion matrices);
// by_length() is sorted ascending by length, ties by code.
class TypeDatabase {
 public:
  // Throws ParseError when empty, DuplicateCode, or NonPositiveLength.
  explicit TypeDatabase(std::vector<AircraftType> entries);

  // The nine-type reference table for the Le Bourget survey.
  static const TypeDatabase& builtin();

  std::span<const AircraftType> entries() const noexcept { return entries_; }
  std::span<const AircraftType> by_length() const noexcept { return sorted_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::optional<std::size_t> index_of(std::string_view code) const;
  const AircraftType* find(std::string_view code) const;

 private:
  std::vector<AircraftType> entries_;
  std::vector<AircraftType> sorted_;
};

// Nearest actual length wins. An exact tie goes to the shorter type, equal
// lengths to the lexicographically smaller code.
const AircraftType& nearest_type(double length_m, const TypeDatabase& db);

std::string classify_by_length(double length_m, const TypeDatabase& db);

// Parses `code,full_name,actual_length_m` CSV (header row required, LF or
// CRLF, optional UTF-8 BOM, double-quoted fields allowed). `source` names the
// input in error messages.
TypeDatabase parse_type_db(std::string_view text, std::string_view source = "<inline>");

// Throws FileNotFound if the file cannot be opened.
TypeDatabase load_type_db(const std::filesystem::path& path);

// Returns the built-in table when no path is given.
TypeDatabase load_type_db(const std::optional<std::filesystem::path>& path);

}  // namespace apronid
