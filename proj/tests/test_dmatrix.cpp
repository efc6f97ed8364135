#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "distwit/dmatrix.hpp"
#include "support.hpp"

using namespace distwit;

namespace {

std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& name, const std::string& body) {
  const auto p = dir / name;
  std::ofstream(p) << body;
  return p;
}

}  // namespace

TEST_CASE("csv table is squared on load") {
  const auto dir = testing::temp_dir("dm");
  const auto dm = load_distance_matrix(write_text(dir, "m.csv", "0,1,2\n1,0,1\n2,1,0\n"), MatrixFormat::csv);
  CHECK(dm.size() == 3);
  CHECK(dm.d2(0, 2) == 4.0);
  CHECK(dm.d2(2, 0) == 4.0);
  CHECK(dm.dist(0, 2) == 2.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("1x1 table") {
  const auto dir = testing::temp_dir("dm");
  const auto dm = load_distance_matrix(write_text(dir, "m.csv", "0\n"), MatrixFormat::csv);
  CHECK(dm.size() == 1);
  CHECK(dm.d2(0, 0) == 0.0);
  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed tables are rejected") {
  const auto dir = testing::temp_dir("dm");
  CHECK_THROWS_AS(load_distance_matrix(write_text(dir, "a.csv", "0,1\n2,0\n"), MatrixFormat::csv), InputError);
  CHECK_THROWS_AS(load_distance_matrix(write_text(dir, "b.csv", "0,-1\n-1,0\n"), MatrixFormat::csv), InputError);
  CHECK_THROWS_AS(load_distance_matrix(write_text(dir, "c.csv", "1,1\n1,0\n"), MatrixFormat::csv), InputError);
  CHECK_THROWS_AS(load_distance_matrix(write_text(dir, "d.csv", "0,1,2\n1,0\n"), MatrixFormat::csv), InputError);
  CHECK_THROWS_AS(load_distance_matrix(write_text(dir, "e.csv", "0,x\nx,0\n"), MatrixFormat::csv), InputError);
  CHECK_THROWS_AS(load_distance_matrix(dir / "missing.csv", MatrixFormat::csv), InputError);
  CHECK_THROWS_AS(load_distance_matrix(write_text(dir, "f.bin", "NOPE"), MatrixFormat::binary), InputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("asymmetry within tolerance is accepted") {
  CHECK_NOTHROW(distance_matrix_from_table({{0, 1}, {1 + 1e-12, 0}}));
  CHECK_THROWS_AS(distance_matrix_from_table({{0, 1}, {1 + 1e-6, 0}}), InputError);
}

TEST_CASE("from_point_cloud") {
  SUBCASE("pythagoras") {
    const auto dm = from_point_cloud(testing::cloud(2, {0, 0, 3, 4}));
    CHECK(dm.d2(0, 1) == 25.0);
  }
  SUBCASE("single point") {
    const auto dm = from_point_cloud(testing::cloud(2, {1, 2}));
    CHECK(dm.size() == 1);
    CHECK(dm.d2(0, 0) == 0.0);
  }
  SUBCASE("unit square") {
    const auto dm = from_point_cloud(testing::cloud(2, {0, 0, 1, 0, 1, 1, 0, 1}));
    CHECK(dm.d2(0, 2) == 2.0);
    CHECK(dm.d2(1, 3) == 2.0);
    CHECK(dm.d2(0, 1) == 1.0);
    CHECK(dm.d2(2, 3) == 1.0);
  }
}

TEST_CASE("non-finite coordinates are rejected") {
  CHECK_THROWS_AS(testing::cloud(2, {0, std::nan("")}), InputError);
  CHECK_THROWS_AS(testing::cloud(2, {0, 1, 2}), InputError);
}

TEST_CASE("rigid motion leaves distances unchanged") {
  const auto pc = testing::random_cloud(30, 3, 11);
  const double a = 0.7, b = -1.3;
  std::vector<double> moved;
  for (std::size_t i = 0; i < pc.size(); ++i) {
    const double x = pc(i, 0), y = pc(i, 1), z = pc(i, 2);
    // rotation about z then about x, then translation
    const double x1 = std::cos(a) * x - std::sin(a) * y, y1 = std::sin(a) * x + std::cos(a) * y;
    const double y2 = std::cos(b) * y1 - std::sin(b) * z, z2 = std::sin(b) * y1 + std::cos(b) * z;
    moved.insert(moved.end(), {x1 + 5.0, y2 - 2.0, z2 + 0.25});
  }
  const auto d0 = from_point_cloud(pc);
  const auto d1 = from_point_cloud(testing::cloud(3, moved));
  for (std::size_t i = 0; i < pc.size(); ++i)
    for (std::size_t j = i + 1; j < pc.size(); ++j) CHECK(d1.d2(i, j) == doctest::Approx(d0.d2(i, j)).epsilon(1e-9));
}

TEST_CASE("binary round trip is bit exact") {
  const auto dir = testing::temp_dir("dm");
  const auto dm = from_point_cloud(testing::random_cloud(40, 3, 3));
  save_distance_matrix_binary(dm, dir / "m.bin");
  const auto back = load_distance_matrix(dir / "m.bin", MatrixFormat::binary);
  CHECK(back.data() == dm.data());
  std::ifstream f(dir / "m.bin", std::ios::binary);
  char magic[4];
  f.read(magic, 4);
  CHECK(std::string(magic, 4) == "DWIT");
  CHECK(std::filesystem::file_size(dir / "m.bin") == 8 + 8 * 40 * 41 / 2);
  std::filesystem::remove_all(dir);
}

TEST_CASE("csv round trip") {
  const auto dir = testing::temp_dir("dm");
  const auto dm = from_point_cloud(testing::random_cloud(10, 2, 4));
  save_distance_matrix_csv(dm, dir / "m.csv");
  const auto back = load_distance_matrix(dir / "m.csv", MatrixFormat::csv);
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j) CHECK(back.d2(i, j) == doctest::Approx(dm.d2(i, j)).epsilon(1e-14));
  std::filesystem::remove_all(dir);
}

TEST_CASE("point cloud csv round trip") {
  const auto dir = testing::temp_dir("dm");
  const auto pc = testing::random_cloud(12, 3, 5);
  save_point_cloud(pc, dir / "c.csv");
  const auto back = load_point_cloud(dir / "c.csv");
  CHECK(back.size() == 12);
  CHECK(back.dim() == 3);
  CHECK(back.coords() == pc.coords());
  std::filesystem::remove_all(dir);
}

TEST_CASE("triangle inequality validation") {
  SUBCASE("euclidean input passes") {
    const auto dm = from_point_cloud(testing::random_cloud(50, 3, 8));
    CHECK(validate_triangle(dm, 5000, 1e-9).pass());
    CHECK(validate_triangle_exhaustive(dm, 1e-9).pass());
  }
  SUBCASE("1,1,5 violates") {
    const auto dm = distance_matrix_from_table({{0, 1, 5}, {1, 0, 1}, {5, 1, 0}});
    const auto rep = validate_triangle_exhaustive(dm, 1e-9);
    REQUIRE_FALSE(rep.pass());
    const auto& v = rep.violations.front();
    CHECK(v.excess == doctest::Approx(3.0));
    CHECK(validate_triangle(dm, 100, 1e-9).violations.size() > 0);
  }
  SUBCASE("n=2 is vacuous") {
    const auto dm = distance_matrix_from_table({{0, 3}, {3, 0}});
    CHECK(validate_triangle(dm, 100, 1e-9).pass());
    CHECK(validate_triangle_exhaustive(dm, 1e-9).pass());
  }
  SUBCASE("sampling is seeded") {
    const auto dm = from_point_cloud(testing::random_cloud(30, 2, 9));
    CHECK(validate_triangle(dm, 100, 1e-9, 4).triples_checked == validate_triangle(dm, 100, 1e-9, 4).triples_checked);
  }
}
