#include <algorithm>
#include <cmath>
#include <numeric>

#include "apronid/error.hpp"
#include "apronid/evaluation.hpp"

namespace apronid {

double mean_detected_length(std::span<const double> lengths) {
  if (lengths.empty()) throw Error(ErrorCode::EmptySample, "mean of zero lengths");
  return std::accumulate(lengths.begin(), lengths.end(), 0.0) / static_cast<double>(lengths.size());
}

int length_accuracy_pct(double mean_detected_m, double actual_m) {
  if (!(actual_m > 0.0)) {
    throw Error(ErrorCode::NonPositiveActual, "actual length must be positive");
  }
  const double relative_error = std::abs(mean_detected_m - actual_m) / actual_m;
  const double pct = std::max(0.0, 100.0 * (1.0 - relative_error));
  return static_cast<int>(std::lround(pct));
}

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> codes)
    : codes_(std::move(codes)), counts_(codes_.size() * codes_.size(), 0) {}

std::vector<std::int64_t> ConfusionMatrix::row(std::size_t actual) const {
  const auto first = counts_.begin() + static_cast<std::ptrdiff_t>(actual * codes_.size());
  return {first, first + static_cast<std::ptrdiff_t>(codes_.size())};
}

std::int64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::int64_t{0});
}

ConfusionMatrix build_confusion_matrix(std::span<const std::pair<std::string, std::string>> pairs,
                                       const TypeDatabase& db) {
  std::vector<std::string> codes;
  for (const AircraftType& t : db.entries()) codes.push_back(t.code);
  ConfusionMatrix matrix(std::move(codes));
  for (const auto& [actual, predicted] : pairs) {
    const auto row = db.index_of(actual);
    if (!row) throw Error(ErrorCode::UnknownCode, "actual type '" + actual + "' not in database");
    const auto col = db.index_of(predicted);
    if (!col) throw Error(ErrorCode::UnknownCode, "predicted type '" + predicted + "' not in database");
    matrix.add(*row, *col);
  }
  return matrix;
}

}  // namespace apronid
