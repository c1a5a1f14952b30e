#include <charconv>
#include <fstream>
#include <sstream>

#include "apronid/dataio.hpp"
#include "apronid/error.hpp"

namespace apronid {

RleMask rle_encode(const PixelMask& mask) {
  const std::uint64_t width = static_cast<std::uint64_t>(mask.width());
  const std::uint64_t total = width * static_cast<std::uint64_t>(mask.height());
  RleMask rle{mask.width(), mask.height(), {}};

  std::uint64_t cursor = 0;  // end of the last emitted run
  const auto points = mask.points();
  std::size_t i = 0;
  while (i < points.size()) {
    const std::uint64_t start = static_cast<std::uint64_t>(points[i].y) * width + static_cast<std::uint64_t>(points[i].x);
    std::uint64_t end = start + 1;
    ++i;
    while (i < points.size() &&
           static_cast<std::uint64_t>(points[i].y) * width + static_cast<std::uint64_t>(points[i].x) == end) {
      ++end;
      ++i;
    }
    rle.runs.push_back(start - cursor);
    rle.runs.push_back(end - start);
    cursor = end;
  }
  if (cursor < total || rle.runs.empty()) rle.runs.push_back(total - cursor);
  return rle;
}

PixelMask rle_decode(const RleMask& rle) {
  if (rle.width < 0 || rle.height < 0) {
    throw Error(ErrorCode::RunSumMismatch, "negative RLE dimensions");
  }
  const std::uint64_t width = static_cast<std::uint64_t>(rle.width);
  const std::uint64_t total = width * static_cast<std::uint64_t>(rle.height);
  std::uint64_t sum = 0;
  for (std::uint64_t r : rle.runs) {
    if (r > total - sum) {
      throw Error(ErrorCode::RunSumMismatch, "runs exceed " + std::to_string(total) + " pixels");
    }
    sum += r;
  }
  if (sum != total) {
    throw Error(ErrorCode::RunSumMismatch,
                "runs cover " + std::to_string(sum) + " of " + std::to_string(total) + " pixels");
  }

  std::vector<PixelPoint> points;
  std::uint64_t cursor = 0;
  for (std::size_t k = 0; k < rle.runs.size(); ++k) {
    const std::uint64_t run = rle.runs[k];
    if (k % 2 == 1) {
      for (std::uint64_t idx = cursor; idx < cursor + run; ++idx) {
        points.push_back({static_cast<std::int32_t>(idx % width), static_cast<std::int32_t>(idx / width)});
      }
    }
    cursor += run;
  }
  return PixelMask::from_points(rle.width, rle.height, std::move(points));
}

std::string rle_to_text(const RleMask& rle) {
  std::string out = std::to_string(rle.width) + " " + std::to_string(rle.height) + "\n";
  for (std::size_t i = 0; i < rle.runs.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(rle.runs[i]);
  }
  return out;
}

namespace {

template <typename Int>
std::vector<Int> parse_ints(std::string_view line, std::string_view source, int line_no) {
  std::vector<Int> values;
  std::size_t pos = 0;
  while (pos < line.size()) {
    if (line[pos] == ' ' || line[pos] == '\t') {
      ++pos;
      continue;
    }
    Int v{};
    const auto [ptr, ec] = std::from_chars(line.data() + pos, line.data() + line.size(), v);
    if (ec != std::errc{} || (ptr != line.data() + line.size() && *ptr != ' ' && *ptr != '\t')) {
      throw Error(ErrorCode::DecodeError, std::string(source) + ":" + std::to_string(line_no) +
                                              ": expected non-negative integers");
    }
    values.push_back(v);
    pos = static_cast<std::size_t>(ptr - line.data());
  }
  return values;
}

}  // namespace

RleMask rle_from_text(std::string_view text, std::string_view source) {
  std::vector<std::string_view> lines;
  while (!text.empty()) {
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    if (line.ends_with('\r')) line.remove_suffix(1);
    lines.push_back(line);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
  }
  if (lines.size() != 2) {
    throw Error(ErrorCode::DecodeError, std::string(source) + ": expected 2 lines, found " +
                                            std::to_string(lines.size()));
  }
  const auto dims = parse_ints<std::int32_t>(lines[0], source, 1);
  if (dims.size() != 2 || dims[0] < 0 || dims[1] < 0) {
    throw Error(ErrorCode::DecodeError, std::string(source) + ":1: expected '<width> <height>'");
  }
  RleMask rle{dims[0], dims[1], parse_ints<std::uint64_t>(lines[1], source, 2)};
  if (rle.runs.empty()) throw Error(ErrorCode::DecodeError, std::string(source) + ":2: no runs");
  return rle;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorCode::IoError, "short write to " + path.string());
}

PixelMask load_mask_rle(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return rle_decode(rle_from_text(text, path.string()));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RunSumMismatch) {
      throw Error(ErrorCode::RunSumMismatch, path.string() + ": " + e.detail());
    }
    throw;
  }
}

void save_mask_rle(const PixelMask& mask, const std::filesystem::path& path) {
  write_text_file(path, rle_to_text(rle_encode(mask)));
}

PixelMask load_mask(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".png") return load_mask_png(path);
  if (ext == ".rle") return load_mask_rle(path);
  throw Error(ErrorCode::DecodeError, path.string() + ": unknown mask format (use .png or .rle)");
}

void save_mask(const PixelMask& mask, const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".png") return save_mask_png(mask, path);
  if (ext == ".rle") return save_mask_rle(mask, path);
  throw Error(ErrorCode::IoError, path.string() + ": unknown mask format (use .png or .rle)");
}

}  // namespace apronid
