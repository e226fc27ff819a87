#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "msfv/errors.hpp"
#include "msfv/field.hpp"
#include "msfv/grid.hpp"

using namespace msfv;

namespace {

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& contents) {
    path = (std::filesystem::temp_directory_path() /
            ("msfv_field_test_" + std::to_string(reinterpret_cast<uintptr_t>(this)) + ".dat"))
               .string();
    std::ofstream out(path);
    out << contents;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("rotated tensor at theta = 0 is diagonal") {
  const TensorField f = rotated_tensor(0.0, 1000.0, 100.0, 10);
  CHECK(f.homogeneous());
  const Tensor2& k = f.tensor2(3);
  CHECK(k.xx == doctest::Approx(1000.0).epsilon(1e-15));
  CHECK(k.yy == doctest::Approx(100.0).epsilon(1e-15));
  CHECK(k.xy == doctest::Approx(0.0).scale(1000.0).epsilon(1e-15));
}

TEST_CASE("rotated tensor at 45 degrees, ratio 100") {
  const TensorField f = rotated_tensor(45.0, 1000.0, 10.0, 1);
  const Tensor2& k = f.tensor2(0);
  CHECK(std::abs(k.xx - 505.0) <= 1e-12 * 505.0);
  CHECK(std::abs(k.yy - 505.0) <= 1e-12 * 505.0);
  CHECK(std::abs(k.xy - 495.0) <= 1e-12 * 495.0);
}

TEST_CASE("rotated tensor at 60 degrees") {
  const TensorField f = rotated_tensor(60.0, 1000.0, 100.0, 1);
  const Tensor2& k = f.tensor2(0);
  const double k12 = 225.0 * std::sqrt(3.0);  // cos60 sin60 (k1 - k2)
  CHECK(std::abs(k.xx - 325.0) <= 1e-12 * 325.0);
  CHECK(std::abs(k.yy - 775.0) <= 1e-12 * 775.0);
  CHECK(std::abs(k.xy - k12) <= 1e-12 * k12);
}

TEST_CASE("rotated tensor rejects non-positive principal values") {
  CHECK_THROWS_AS(rotated_tensor(30.0, -1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rotated_tensor(30.0, 1.0, 0.0, 1), std::invalid_argument);
}

TEST_CASE("spe10 reader on a constructed mini file") {
  // 2x2x1 grid: 4 cells per component, kx block first, x fastest.
  const TempFile file("1 2 3 4  5 6 7 8  9 10 11 12");
  const Spe10Dims dims{2, 2, 1};

  SUBCASE("kx and ky form the diagonal tensor") {
    const TensorField f = read_spe10(file.path, 1, 1, true, dims);
    REQUIRE(f.num_cells() == 4);
    CHECK(f.tensor2(0).xx == 1.0);
    CHECK(f.tensor2(1).xx == 2.0);
    CHECK(f.tensor2(2).xx == 3.0);
    CHECK(f.tensor2(3).xx == 4.0);
    CHECK(f.tensor2(0).yy == 5.0);
    CHECK(f.tensor2(3).yy == 8.0);
    CHECK(f.tensor2(0).xy == 0.0);
  }
  SUBCASE("isotropic kx when use_ky is off") {
    const TensorField f = read_spe10(file.path, 1, 1, false, dims);
    CHECK(f.tensor2(2).yy == 3.0);
  }
}

TEST_CASE("spe10 reader reports wrong token counts") {
  const Spe10Dims dims{2, 2, 1};
  const TempFile truncated("1 2 3 4 5 6 7 8 9 10 11");
  CHECK_THROWS_AS(read_spe10(truncated.path, 1, 1, true, dims), FormatError);
  try {
    read_spe10(truncated.path, 1, 1, true, dims);
  } catch (const FormatError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("12") != std::string::npos);
    CHECK(msg.find("11") != std::string::npos);
  }
  const TempFile extra("1 2 3 4 5 6 7 8 9 10 11 12 13");
  CHECK_THROWS_AS(read_spe10(extra.path, 1, 1, true, dims), FormatError);
}

TEST_CASE("spe10 reader rejects non-positive values with a cell index") {
  const Spe10Dims dims{2, 2, 1};
  const TempFile bad("1 2 -3 4 5 6 7 8 9 10 11 12");
  CHECK_THROWS_AS(read_spe10(bad.path, 1, 1, true, dims), DataError);
}

TEST_CASE("spe10 layer selection and 3-D ranges") {
  // 2x1x3 grid, components blocked, z slowest.
  std::ostringstream src;
  for (int comp = 0; comp < 3; ++comp) {
    for (int cell = 0; cell < 6; ++cell) src << (100 * (comp + 1) + cell) << ' ';
  }
  const TempFile file(src.str());
  const Spe10Dims dims{2, 1, 3};

  SUBCASE("single layer, bottom is layer nz") {
    const TensorField f = read_spe10(file.path, 3, 3, true, dims);
    REQUIRE(f.dim() == 2);
    CHECK(f.tensor2(0).xx == 104.0);
    CHECK(f.tensor2(1).xx == 105.0);
    CHECK(f.tensor2(0).yy == 204.0);
  }
  SUBCASE("layer range gives a 3-D diagonal field") {
    const TensorField f = read_spe10(file.path, 2, 3, true, dims);
    REQUIRE(f.dim() == 3);
    REQUIRE(f.num_cells() == 4);
    CHECK(f.diag3(0) == std::array<double, 3>{102.0, 202.0, 302.0});
    CHECK(f.diag3(3) == std::array<double, 3>{105.0, 205.0, 305.0});
  }
  SUBCASE("layer range validation") {
    CHECK_THROWS_AS(read_spe10(file.path, 0, 1, true, dims), std::invalid_argument);
    CHECK_THROWS_AS(read_spe10(file.path, 1, 4, true, dims), std::invalid_argument);
  }
}

TEST_CASE("spe10 ingestion is lossless against an independent parse") {
  // Oracle: a second, dumb whitespace parse of the same text.
  std::ostringstream src;
  for (int i = 0; i < 12; ++i) src << 0.5 * (i + 1) << "e-1 ";
  const TempFile file(src.str());
  std::vector<double> oracle;
  {
    std::ifstream in(file.path);
    double v;
    while (in >> v) oracle.push_back(v);
  }
  const TensorField f = read_spe10(file.path, 1, 1, true, Spe10Dims{2, 2, 1});
  for (int c = 0; c < 4; ++c) {
    CHECK(f.tensor2(c).xx == oracle[c]);
    CHECK(f.tensor2(c).yy == oracle[4 + c]);
  }
}

TEST_CASE("full spe10 dataset, when present") {
  const char* env = std::getenv("MSFV_SPE10_PATH");
  const std::string path = env != nullptr ? env : "data/spe10_perm.dat";
  if (!std::filesystem::exists(path)) {
    MESSAGE("spe10 dataset not available, skipping");
    return;
  }
  const TensorField f = read_spe10(path, 85, 85, true);
  REQUIRE(f.num_cells() == 13200);
  // Oracle: independent one-pass parse computing layer-85 kx statistics.
  std::ifstream in(path);
  std::vector<double> tokens;
  double v;
  while (in >> v) tokens.push_back(v);
  REQUIRE(tokens.size() == static_cast<size_t>(3) * 60 * 220 * 85);
  double lo = 1e300, hi = -1e300;
  const size_t offset = static_cast<size_t>(60) * 220 * 84;
  for (size_t i = 0; i < 13200; ++i) {
    lo = std::min(lo, tokens[offset + i]);
    hi = std::max(hi, tokens[offset + i]);
  }
  double flo = 1e300, fhi = -1e300;
  for (int c = 0; c < 13200; ++c) {
    flo = std::min(flo, f.tensor2(c).xx);
    fhi = std::max(fhi, f.tensor2(c).xx);
  }
  CHECK(flo == lo);
  CHECK(fhi == hi);
}

TEST_CASE("lognormal field degenerates to a constant at sigma = 0") {
  const Grid g = build_cartesian_grid({1.0, 1.0}, {5, 5});
  const TensorField f = lognormal_field(g, 4, 2.0, 0.0);
  for (int c = 0; c < g.num_cells(); ++c) {
    CHECK(f.tensor2(c).xx == doctest::Approx(std::exp(2.0)).epsilon(1e-15));
    CHECK(f.tensor2(c).xy == 0.0);
  }
}

TEST_CASE("lognormal field is deterministic per seed") {
  const Grid g = build_cartesian_grid({1.0, 1.0}, {10, 10});
  const TensorField a = lognormal_field(g, 11, 0.0, 2.0);
  const TensorField b = lognormal_field(g, 11, 0.0, 2.0);
  const TensorField c = lognormal_field(g, 12, 0.0, 2.0);
  bool same = true, differs = false;
  for (int i = 0; i < g.num_cells(); ++i) {
    same = same && a.tensor2(i).xx == b.tensor2(i).xx;
    differs = differs || a.tensor2(i).xx != c.tensor2(i).xx;
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("lognormal sample mean of log k within three standard errors") {
  const Grid g = build_cartesian_grid({1.0, 1.0}, {100, 100});
  const double mu = -1.5, sigma = 3.0;
  const TensorField f = lognormal_field(g, 1, mu, sigma);
  double sum = 0.0;
  for (int c = 0; c < g.num_cells(); ++c) sum += std::log(f.tensor2(c).xx);
  const double mean = sum / g.num_cells();
  const double standard_error = sigma / std::sqrt(static_cast<double>(g.num_cells()));
  CHECK(std::abs(mean - mu) <= 3.0 * standard_error);
}

TEST_CASE("every produced tensor passes the SPD check") {
  const Grid g = build_cartesian_grid({1.0, 1.0}, {6, 6});
  CHECK_NOTHROW(lognormal_field(g, 3, 0.0, 4.0).validate_spd());
  CHECK_NOTHROW(rotated_tensor(33.0, 1000.0, 1.0, 36).validate_spd());
  CHECK_THROWS_AS(TensorField::cellwise2({Tensor2{1.0, 2.0, 1.0}}), DataError);
}

TEST_CASE("3-D lognormal field") {
  const Grid g = build_cartesian_grid({1.0, 1.0, 1.0}, {3, 3, 3});
  const TensorField f = lognormal_field(g, 5, 0.0, 1.0);
  REQUIRE(f.dim() == 3);
  CHECK(f.num_cells() == 27);
  const auto& d = f.diag3(13);
  CHECK(d[0] == d[1]);
  CHECK(d[1] == d[2]);
}
