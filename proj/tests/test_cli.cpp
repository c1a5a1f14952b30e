#include <gtest/gtest.h>

#include <cmath>
#include <fstream>

#include "apronid/dataio.hpp"
#include "apronid/synthkit.hpp"
#include "json.hpp"
#include "oracles.hpp"

using namespace apronid;
namespace fs = std::filesystem;

namespace {

oracle::CommandResult cli(const std::string& args) {
  return oracle::run_command(std::string(APRONID_CLI_PATH) + " " + args + " 2>/dev/null");
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

fs::path synth_rect(const fs::path& dir, const std::string& name, double length_m) {
  SynthSpec s;
  s.shape = SynthShape::rectangle;
  s.length_m = length_m;
  s.secondary_m = 4.0;
  s.heading_deg = 27.0;
  s.gsd = GroundSampleDistance(3.13);
  const auto path = dir / name;
  save_mask(synth_mask(s).mask, path);
  return path;
}

}  // namespace

TEST(Cli, GsdText) {
  auto r = cli("gsd --sensor-width-mm 12.75 --altitude-m 120 --focal-length-mm 10.6 --image-width-px 4608");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.output, "3.13 cm/px\n");
  r = cli("gsd --sensor-width-mm 10 --altitude-m 1 --focal-length-mm 10 --image-width-px 100");
  EXPECT_EQ(r.output, "1.00 cm/px\n");
}

TEST(Cli, GsdJsonHasFullPrecision) {
  const auto r = cli("--format json gsd --sensor-width-mm 12.75 --altitude-m 120 --focal-length-mm 10.6 "
                     "--image-width-px 4608");
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.output);
  EXPECT_EQ(j["version"], "0.1.0");
  EXPECT_NEAR(j["gsd_cm_per_px"].get<double>(), 153000.0 / 48844.8, 1e-12);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(cli("gsd --sensor-width-mm 12.75 --altitude-m 0 --focal-length-mm 10.6 --image-width-px 4608").exit_code, 2);
  EXPECT_EQ(cli("gsd --sensor-width-mm 12.75").exit_code, 2);
  EXPECT_EQ(cli("").exit_code, 2);
  EXPECT_EQ(cli("bogus").exit_code, 2);
  EXPECT_EQ(cli("--format yaml hull --mask x.png").exit_code, 2);
  EXPECT_EQ(cli("identify --mask x.png").exit_code, 2);
  EXPECT_EQ(cli("identify --mask x.png --altitude-m 3").exit_code, 2);
  EXPECT_EQ(cli("synth --out /tmp/x --noise 0.5").exit_code, 2);
  EXPECT_EQ(cli("--help").exit_code, 0);
}

TEST(Cli, IdentifySyntheticMasks) {
  const auto dir = oracle::fresh_dir("cli_identify");
  const auto lm = synth_rect(dir, "lm.png", 35.0);
  auto r = cli("--format json identify --mask " + lm.string() + " --gsd 3.13");
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.output);
  EXPECT_EQ(j["type_code"], "LM100J");
  // The farthest pair of a rectangle is its diagonal.
  EXPECT_NEAR(j["length_m"].get<double>(), std::hypot(35.0, 4.0), 0.1);
  EXPECT_EQ(r.output, cli("--format json identify --mask " + lm.string() + " --gsd 3.13").output);

  const auto a380 = synth_rect(dir, "a380.rle", 73.0);
  r = cli("identify --mask " + a380.string() +
          " --sensor-width-mm 12.75 --altitude-m 120 --focal-length-mm 10.6 --image-width-px 4608");
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("A-380"), std::string::npos) << r.output;
}

TEST(Cli, IdentifyOnePixelAndTypesFallback) {
  const auto dir = oracle::fresh_dir("cli_identify_px");
  save_mask(PixelMask::from_points(3, 3, {{1, 1}}), dir / "one.rle");
  auto r = cli("--format json identify --mask " + (dir / "one.rle").string() + " --gsd 3.13");
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.output);
  EXPECT_EQ(j["length_m"].get<double>(), 0.0);
  EXPECT_EQ(j["type_code"], "CM2");

  std::ofstream(dir / "types.csv") << "code,full_name,actual_length_m\nX,Test,10\n";
  r = oracle::run_command("APRONID_TYPES=" + (dir / "types.csv").string() + " " + APRONID_CLI_PATH +
                          " --format json identify --mask " + (dir / "one.rle").string() + " --gsd 3.13");
  EXPECT_EQ(nlohmann::json::parse(r.output)["type_code"], "X");
}

TEST(Cli, DataErrors) {
  const auto dir = oracle::fresh_dir("cli_data_err");
  save_mask(PixelMask(3, 3), dir / "empty.rle");
  EXPECT_EQ(cli("identify --mask " + (dir / "empty.rle").string() + " --gsd 3").exit_code, 3);
  EXPECT_EQ(cli("identify --mask " + (dir / "missing.png").string() + " --gsd 3").exit_code, 3);
  EXPECT_EQ(cli("hull --mask " + (dir / "empty.rle").string()).exit_code, 3);
  EXPECT_EQ(cli("evaluate --manifest " + (dir / "none.json").string()).exit_code, 3);
  std::ofstream(dir / "bad.json") << R"({"images": []})";
  EXPECT_EQ(cli("evaluate --manifest " + (dir / "bad.json").string()).exit_code, 3);
}

TEST(Cli, Hull) {
  const auto dir = oracle::fresh_dir("cli_hull");
  std::vector<PixelPoint> rect;
  for (std::int32_t y = 0; y < 4; ++y)
    for (std::int32_t x = 0; x < 3; ++x) rect.push_back({x, y});
  save_mask(PixelMask::from_points(3, 4, rect), dir / "rect.png");
  auto r = cli("--format json hull --mask " + (dir / "rect.png").string());
  ASSERT_EQ(r.exit_code, 0);
  auto j = nlohmann::json::parse(r.output);
  EXPECT_EQ(j["vertices"].size(), 4u);
  EXPECT_EQ(j["diameter_sq_px"], 13);

  save_mask(PixelMask::from_points(5, 5, {{0, 0}, {1, 1}, {2, 2}, {4, 4}}), dir / "diag.rle");
  j = nlohmann::json::parse(cli("--format json hull --mask " + (dir / "diag.rle").string()).output);
  EXPECT_EQ(j["vertices"].size(), 2u);
  EXPECT_EQ(j["diameter_sq_px"], 32);

  r = cli("hull --mask " + (dir / "rect.png").string() + " --format csv");
  EXPECT_EQ(r.output.substr(0, r.output.find('\n')), "index,x,y,diameter_px");
}

TEST(Cli, SynthThenEvaluate) {
  const auto dir = oracle::fresh_dir("cli_pipeline");
  auto r = cli("synth --out " + (dir / "ds").string() + " --per-type 1 --seed 3");
  ASSERT_EQ(r.exit_code, 0);
  r = cli("evaluate --manifest " + (dir / "ds/manifest.json").string() + " --out " + (dir / "rep").string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("ap         = 1.000"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("average accuracy: 100"), std::string::npos) << r.output;
  EXPECT_TRUE(fs::exists(dir / "rep/eval_report.json"));
  EXPECT_TRUE(fs::exists(dir / "rep/confusion_matrix.csv"));

  const auto a = cli("--format json evaluate --manifest " + (dir / "ds/manifest.json").string() + " --out " +
                     (dir / "rep2").string());
  const auto b = cli("--serial --format json evaluate --manifest " + (dir / "ds/manifest.json").string() +
                     " --out " + (dir / "rep3").string());
  EXPECT_EQ(a.output, b.output);
  EXPECT_EQ(slurp(dir / "rep2/eval_report.json"), a.output);
}

TEST(Cli, EmptySynthEvaluatesCleanly) {
  const auto dir = oracle::fresh_dir("cli_empty");
  ASSERT_EQ(cli("synth --out " + (dir / "ds").string() + " --per-type 0").exit_code, 0);
  const auto r = cli("--format json evaluate --manifest " + (dir / "ds/manifest.json").string() + " --out " +
                     (dir / "rep").string());
  ASSERT_EQ(r.exit_code, 0);
  const auto j = nlohmann::json::parse(r.output);
  for (const auto& [k, v] : j["coco"].items()) EXPECT_EQ(v.get<double>(), -1.0) << k;
}

TEST(Cli, EvaluateWithoutDetections) {
  const auto dir = oracle::fresh_dir("cli_nodet");
  fs::create_directories(dir / "masks");
  save_mask(PixelMask::from_points(8, 8, {{1, 1}, {2, 1}}), dir / "masks/g.rle");
  std::ofstream(dir / "m.json") << R"({"gsd_cm_per_px": 3.13, "images": [{"id": "a", "width": 8, "height": 8,
      "ground_truth": [{"mask_path": "masks/g.rle", "type_code": "CM2"}]}]})";
  const auto r = cli("evaluate --manifest " + (dir / "m.json").string() + " --out " + (dir / "rep").string());
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_NE(r.output.find("ap         = 0.000"), std::string::npos) << r.output;
}
