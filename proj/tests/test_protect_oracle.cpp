#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "distwit/protect_oracle.hpp"
#include "support.hpp"

using namespace distwit;

namespace {

std::vector<double> zeros(std::size_t n) { return std::vector<double>(n, 0.0); }

std::vector<double> random_weights(std::size_t n, std::uint64_t seed, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, hi);
  std::vector<double> w(n);
  for (double& x : w) x = u(rng);
  return w;
}

double power(const PointCloud& pts, const std::vector<double>& w2, PointId q, std::span<const double> c) {
  double s = 0.0;
  for (std::size_t k = 0; k < pts.dim(); ++k) s += testing::sq(c[k] - pts(static_cast<std::size_t>(q), k));
  return s - w2[static_cast<std::size_t>(q)];
}

// hexagon around the origin, radii slightly uneven
PointCloud flower() {
  std::vector<double> xy{0.01, -0.02};
  const double radii[6] = {1.0, 1.07, 0.96, 1.03, 0.98, 1.05};
  for (int i = 0; i < 6; ++i) {
    const double a = i * std::numbers::pi / 3 + 0.05 * i * i;
    xy.push_back(radii[i] * std::cos(a));
    xy.push_back(radii[i] * std::sin(a));
  }
  return PointCloud(2, xy);
}

}  // namespace

TEST_CASE("three points give a triangle") {
  const auto pts = testing::cloud(2, {0, 0, 1, 0, 0.3, 0.8});
  const auto k = brute_delaunay(pts, zeros(3));
  CHECK(k == SimplicialComplex::closure_of({{0, 1, 2}}));
  CHECK(brute_delaunay_lp(pts, zeros(3)) == k);
}

TEST_CASE("square is degenerate, weights break the tie") {
  const auto sq = testing::cloud(2, {0, 0, 1, 0, 1, 1, 0, 1});
  CHECK_THROWS_AS(brute_delaunay(sq, zeros(4)), OracleDegeneracy);
  try {
    brute_delaunay(sq, zeros(4));
  } catch (const OracleDegeneracy& e) {
    CHECK(e.tuple().size() == 4);
  }
  std::vector<double> w{0.1, 0, 0, 0};
  const auto k = brute_delaunay(sq, w);
  CHECK(k.contains({0, 2}));
  CHECK_FALSE(k.contains({1, 3}));
  CHECK(k.count(2) == 2);
  CHECK(brute_delaunay_lp(sq, w) == k);
}

TEST_CASE("size and dimension checks") {
  CHECK_THROWS_AS(brute_delaunay(testing::random_cloud(65, 2, 1), zeros(65)), InputError);
  CHECK_THROWS_AS(brute_delaunay(testing::random_cloud(10, 4, 1), zeros(10)), InputError);
  const auto pts = testing::cloud(2, {0, 0, 1, 0, 0.3, 0.8});
  CHECK_THROWS_AS(measure_protection(pts, zeros(3), SimplicialComplex::closure_of({{0, 1}}), {1, 2}), InputError);
}

TEST_CASE("closure shortcut agrees with the linear program") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const std::size_t dim = 2 + seed % 2;
    const auto pts = testing::random_cloud(12, dim, seed);
    const auto w = random_weights(12, seed + 100, seed % 3 == 0 ? 0.0 : 0.05);
    const auto a = brute_delaunay(pts, w);
    const auto b = brute_delaunay_lp(pts, w);
    CHECK(a == b);
    CHECK(a.is_downward_closed());
    CHECK(a.max_dim() <= static_cast<int>(dim));
  }
  // collinear points in the plane
  const auto line = testing::cloud(2, {0, 0, 1, 1, 2.5, 2.5, 4, 4});
  const auto k = brute_delaunay(line, zeros(4));
  CHECK(k.count(1) == 3);
  CHECK(k.count(2) == 0);
}

TEST_CASE("empty weighted sphere property") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto pts = testing::random_cloud(15, 2, seed);
    const auto w = random_weights(15, seed, 0.02);
    const auto k = brute_delaunay(pts, w);
    for (const Simplex& t : k.simplices(2)) {
      const auto rec = measure_protection(pts, w, k, t);
      const double base = power(pts, w, t[0], rec.c);
      for (PointId v : t) CHECK(power(pts, w, v, rec.c) == doctest::Approx(base).epsilon(1e-9).scale(1.0));
      for (PointId q = 0; q < 15; ++q)
        if (!std::binary_search(t.begin(), t.end(), q)) CHECK(power(pts, w, q, rec.c) > base);
      CHECK(rec.protection > 0.0);
    }
    // a triangle outside the complex has a point strictly inside its sphere
    for (PointId a = 0; a < 15; ++a)
      for (PointId b = a + 1; b < 15; ++b)
        for (PointId c = b + 1; c < 15; ++c)
          if (!k.contains({a, b, c})) CHECK(max_protection_margin(pts, w, {a, b, c}).margin < 0.0);
  }
}

TEST_CASE("protection matches a grid search on edges") {
  const auto pts = testing::random_cloud(10, 2, 42);
  const auto w = zeros(10);
  const auto k = brute_delaunay(pts, w);
  for (const Simplex& e : k.simplices(1)) {
    const auto opt = max_protection_margin(pts, w, e);
    CHECK(opt.margin >= 0.0);
    if (!opt.bounded) continue;
    // bisector line through the midpoint
    const double mx = 0.5 * (pts(e[0], 0) + pts(e[1], 0));
    const double my = 0.5 * (pts(e[0], 1) + pts(e[1], 1));
    double dx = -(pts(e[1], 1) - pts(e[0], 1));
    double dy = pts(e[1], 0) - pts(e[0], 0);
    const double len = std::hypot(dx, dy);
    dx /= len;
    dy /= len;
    double best = -std::numeric_limits<double>::infinity();
    for (int i = -200000; i <= 200000; ++i) {
      const double t = i * 1e-4;
      const std::vector<double> c{mx + t * dx, my + t * dy};
      best = std::max(best, protection_margin_at(pts, w, e, c));
    }
    CHECK(best <= opt.margin + 1e-9);
    CHECK(best == doctest::Approx(opt.margin).epsilon(1e-2).scale(1.0));
    CHECK(protection_margin_at(pts, w, e, opt.c) == doctest::Approx(opt.margin).scale(1.0));
  }
}

TEST_CASE("margin behaviour") {
  const auto tri = testing::cloud(2, {0, 0, 1, 0, 0.5, 0.9});
  CHECK(std::isinf(max_protection_margin(tri, zeros(3), {0, 1, 2}).margin));

  // mirror image of an edge endpoint across the bisector ties it
  const auto mirror = testing::cloud(2, {0, 0, 2, 0, 1, 1, 1, -1});
  const auto opt = max_protection_margin(mirror, zeros(4), {0, 2, 3});
  CHECK(opt.margin == doctest::Approx(0.0).scale(1.0));

  // moving the fourth point away increases the margin
  double prev = -1.0;
  for (double far : {1.0, 1.5, 2.5, 4.0}) {
    const auto pts = testing::cloud(2, {0, 0, 1, 0, 0.5, 0.9, 0.5, -far});
    const double m = max_protection_margin(pts, zeros(4), {0, 1, 2}).margin;
    CHECK(m > prev);
    prev = m;
  }

  // adding the same constant to every weight changes nothing
  const auto pts = testing::random_cloud(10, 2, 9);
  auto w = random_weights(10, 9, 0.02);
  const auto k = brute_delaunay(pts, w);
  std::vector<double> shifted = w;
  for (double& x : shifted) x += 0.3;
  CHECK(brute_delaunay(pts, shifted) == k);
  for (const Simplex& t : k.simplices(2))
    CHECK(max_protection_margin(pts, shifted, t).margin ==
          doctest::Approx(max_protection_margin(pts, w, t).margin).epsilon(1e-9).scale(1.0));
}

TEST_CASE("cell boundedness") {
  const auto sq = testing::cloud(2, {0, 0, 1, 0, 1, 1, 0, 1, 0.5, 0.45});
  CHECK(cell_bounded(sq, 4));
  for (PointId p = 0; p < 4; ++p) CHECK_FALSE(cell_bounded(sq, p));
  CHECK(cell_bounded(sq, 4, 360));
  CHECK_FALSE(cell_bounded(sq, 0, 360));

  std::vector<double> cube;
  for (int i = 0; i < 8; ++i)
    for (int b = 0; b < 3; ++b) cube.push_back((i >> b) & 1);
  cube.insert(cube.end(), {0.5, 0.5, 0.5});
  const PointCloud c3(3, cube);
  CHECK(cell_bounded(c3, 8));
  CHECK_FALSE(cell_bounded(c3, 0));

  const auto line = testing::cloud(1, {0, 1, 3});
  CHECK(cell_bounded(line, 1));
  CHECK_FALSE(cell_bounded(line, 0));
  CHECK_FALSE(cell_bounded(line, 2));
}

TEST_CASE("protection decays by the face dimension") {
  const auto pts = flower();
  const std::vector<PointId> center{0};
  const auto rep = verify_decay_lemma(pts, zeros(7), std::nullopt, center);
  REQUIRE(rep.vertices.size() == 1);
  const auto& v = rep.vertices[0];
  CHECK(v.bounded);
  CHECK(v.hypothesis);
  CHECK(rep.asserted == 1);
  CHECK(v.faces_checked == 7);  // the vertex and six edges
  CHECK(v.violations.empty());
  CHECK(v.worst_ratio >= 1.0);

  // hypothesis fails when the requested protection is too large
  const auto strict = verify_decay_lemma(pts, zeros(7), 100.0, center);
  CHECK_FALSE(strict.vertices[0].hypothesis);
  CHECK(strict.asserted == 0);

  // whole configuration: the hexagon vertices are unbounded
  const auto all = verify_decay_lemma(pts, zeros(7));
  CHECK(all.vertices.size() == 7);
  CHECK(all.asserted == 1);
  CHECK(all.violations() == 0);

  const auto line = testing::cloud(1, {0, 1, 2.3, 3.1});
  const auto l = verify_decay_lemma(line, zeros(4));
  CHECK(l.asserted == 2);
  CHECK(l.violations() == 0);
}

TEST_CASE("witness complex lies inside the weighted Delaunay complex") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto W = testing::random_cloud(20, 2, seed);
    const auto dm = from_point_cloud(W);
    const Net net = farthest_point_sample(dm, 0, StopRule::landmarks(6));
    WeightAssignment w(20);
    if (seed % 2)
      for (std::size_t i = 0; i < net.size(); ++i)
        w.set_w2(net.landmark_ids[i], 0.1 * testing::sq(net.nearest_dist[i]));
    const auto rep = verify_witness_inclusion(W, net.landmark_ids, w, 2);
    CHECK(rep.pass());
    CHECK(rep.witness.count(0) == 6);
    CHECK(rep.delaunay.count(0) == 6);
  }
  const auto single = verify_witness_inclusion(testing::cloud(2, {0.3, 0.4}), {0}, WeightAssignment(1), 1);
  CHECK(single.pass());
  CHECK(single.witness.total() == 1);
  CHECK(single.delaunay.total() == 1);
}

TEST_CASE("ambient stability audit") {
  const auto W = testing::random_cloud(200, 2, 3);
  const auto dm = from_point_cloud(W);
  const Net net = farthest_point_sample(dm, 0, StopRule::landmarks(20));
  WeightParams params = practical_params(1, net.lambda);
  params.gamma0 = 0.9;
  const WeightAssignment w(200);
  CHECK(stability_audit_ambient(W, dm, net, w, params, 5, 0).triangulations == 0);
  const auto rep = stability_audit_ambient(W, dm, net, w, params, 5, 3);
  CHECK(rep.triangulations % 3 == 0);
  CHECK(rep.triangulations <= 15);
  for (const auto& f : rep.findings) {
    CHECK(f.perturbed_w2 >= 0.0);
    CHECK(std::binary_search(f.simplex.begin(), f.simplex.end(), f.landmark));
  }
}
