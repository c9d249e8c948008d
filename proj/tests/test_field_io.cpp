#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "mw/errors.hpp"
#include "mw/field.hpp"

using namespace mw;

namespace {

std::string temp_path(const char* tag) {
  static int counter = 0;
  return std::string("mwfld_test_") + tag + "_" + std::to_string(counter++) + ".bin";
}

ComplexField random_field(int rank, std::uint32_t seed) {
  ComplexField f;
  f.grid.rank = rank;
  f.grid.n = rank == 3 ? std::array<std::int64_t, 3>{5, 4, 3}
                       : std::array<std::int64_t, 3>{6, 5, 0};
  f.grid.spacing = {0.25, 0.3, 0.35};
  f.grid.origin = {-0.5, -0.6, -0.35};
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const auto N = size_t(f.grid.count());
  f.values.resize(N);
  f.mask.resize(N);
  for (size_t i = 0; i < N; ++i) {
    f.values[i] = {u(rng), u(rng)};
    f.mask[i] = (rng() % 5 == 0) ? 1 : 0;
    if (f.mask[i]) f.values[i] = 0;
  }
  return f;
}

struct FileGuard {
  std::string path;
  ~FileGuard() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("grid bookkeeping: count, stride, coord") {
  GridSpec g;
  g.rank = 3;
  g.n = {4, 5, 6};
  g.spacing = {0.1, 0.2, 0.3};
  g.origin = {-1.0, -2.0, -3.0};
  CHECK(g.count() == 120);
  CHECK(g.stride(0) == 30);
  CHECK(g.stride(1) == 6);
  CHECK(g.stride(2) == 1);
  CHECK(g.coord(2, 10) == doctest::Approx(0.0));
  CHECK(g.coord(0, 0) == doctest::Approx(-1.0));
}

TEST_CASE("make_grid includes the center node and covers the requested extents") {
  const double h = 0.25;
  const GridSpec g = make_grid(3, h, {2.0, 1.0, 1.5}, {1.0, 1.0, 1.5}, 4);
  // a node sits exactly at coordinate 0 on every axis
  for (int a = 0; a < 3; ++a) {
    const double idx = -g.origin[a] / h;
    CHECK(idx == doctest::Approx(std::round(idx)).epsilon(1e-12));
    // non-absorbing region spans at least [-lo, hi]
    const double lo_req = (a == 0) ? 2.0 : (a == 1 ? 1.0 : 1.5);
    const double hi_req = (a == 0) ? 1.0 : (a == 1 ? 1.0 : 1.5);
    CHECK(g.coord(a, g.pml_cells) <= -lo_req + 1e-12);
    CHECK(g.coord(a, g.n[a] - 1 - g.pml_cells) >= hi_req - 1e-12);
  }
  CHECK(g.pml_cells == 4);
  // uniform spacing preserved
  for (int a = 0; a < 3; ++a) CHECK(g.spacing[a] == doctest::Approx(h));
}

TEST_CASE("grid validation flags too-coarse spacing") {
  // lambda/4 is a hard error; lambda/12 passes
  const double k = 1.0;
  const double lam = 2 * M_PI / k;
  GridSpec coarse = make_grid(2, lam / 3.9, {3.0, 3.0, 0}, {3.0, 3.0, 0}, 4);
  CHECK_THROWS(coarse.validate(k));
  GridSpec fine = make_grid(2, lam / 12, {3.0, 3.0, 0}, {3.0, 3.0, 0}, 4);
  CHECK_NOTHROW(fine.validate(k));
}

TEST_CASE("field round-trips bit-exactly (3D)") {
  const ComplexField f = random_field(3, 42);
  FileGuard fg{temp_path("rt3")};
  save_field(fg.path, f);
  const ComplexField g = load_field(fg.path);
  REQUIRE(g.grid.rank == f.grid.rank);
  for (int a = 0; a < 3; ++a) {
    CHECK(g.grid.n[a] == f.grid.n[a]);
    // bit-exact doubles
    CHECK(std::memcmp(&g.grid.spacing[a], &f.grid.spacing[a], sizeof(double)) == 0);
    CHECK(std::memcmp(&g.grid.origin[a], &f.grid.origin[a], sizeof(double)) == 0);
  }
  REQUIRE(g.values.size() == f.values.size());
  CHECK(std::memcmp(g.values.data(), f.values.data(),
                    f.values.size() * sizeof(std::complex<double>)) == 0);
  REQUIRE(g.mask.size() == f.mask.size());
  CHECK(std::memcmp(g.mask.data(), f.mask.data(), f.mask.size()) == 0);
}

TEST_CASE("field round-trips bit-exactly (2D)") {
  const ComplexField f = random_field(2, 7);
  FileGuard fg{temp_path("rt2")};
  save_field(fg.path, f);
  const ComplexField g = load_field(fg.path);
  REQUIRE(g.grid.rank == 2);
  CHECK(std::memcmp(g.values.data(), f.values.data(),
                    f.values.size() * sizeof(std::complex<double>)) == 0);
  CHECK(std::memcmp(g.mask.data(), f.mask.data(), f.mask.size()) == 0);
}

TEST_CASE("double save produces identical bytes") {
  const ComplexField f = random_field(3, 99);
  FileGuard a{temp_path("dupa")}, b{temp_path("dupb")};
  save_field(a.path, f);
  save_field(b.path, f);
  std::ifstream fa(a.path, std::ios::binary), fb(b.path, std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(fa)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(fb)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  CHECK(!sa.empty());
}

TEST_CASE("truncated file raises a clean I/O error") {
  const ComplexField f = random_field(3, 5);
  FileGuard fg{temp_path("trunc")};
  save_field(fg.path, f);
  // cut the file short
  std::ifstream in(fg.path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();
  std::ofstream out(fg.path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), std::streamsize(bytes.size() / 2));
  out.close();
  CHECK_THROWS_AS(load_field(fg.path), io_error);
}

TEST_CASE("bad magic and future version are rejected by name") {
  const ComplexField f = random_field(2, 3);
  FileGuard fg{temp_path("ver")};
  save_field(fg.path, f);
  std::ifstream in(fg.path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  in.close();

  SUBCASE("magic") {
    std::string bad = bytes;
    bad[0] = 'X';
    std::ofstream out(fg.path, std::ios::binary | std::ios::trunc);
    out.write(bad.data(), std::streamsize(bad.size()));
    out.close();
    CHECK_THROWS_AS(load_field(fg.path), io_error);
  }
  SUBCASE("version+1") {
    std::string bad = bytes;
    bad[6] = char(bad[6] + 1);  // little-endian u32 version right after magic
    std::ofstream out(fg.path, std::ios::binary | std::ios::trunc);
    out.write(bad.data(), std::streamsize(bad.size()));
    out.close();
    try {
      load_field(fg.path);
      FAIL("expected io_error");
    } catch (const io_error& e) {
      const std::string msg = e.what();
      // names both the found and the supported version
      CHECK(msg.find('2') != std::string::npos);
      CHECK(msg.find('1') != std::string::npos);
    }
  }
}

TEST_CASE("missing file raises io_error") {
  CHECK_THROWS_AS(load_field("definitely_not_here_31415926.bin"), io_error);
}
