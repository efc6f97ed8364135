#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>

#include "distwit/netsel.hpp"
#include "support.hpp"

using namespace distwit;

namespace {

DistanceMatrix line(const std::vector<double>& xs) {
  std::vector<double> c(xs);
  return from_point_cloud(testing::cloud(1, c));
}

// Independent farthest-point sampler: recompute min distance to the
// current set from scratch at every step.
std::vector<PointId> naive_fps(const DistanceMatrix& dm, PointId seed, std::size_t k) {
  std::vector<PointId> l{seed};
  while (l.size() < k) {
    double best = -1.0;
    PointId arg = -1;
    for (std::size_t i = 0; i < dm.size(); ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (PointId q : l) d = std::min(d, dm.d2(i, static_cast<std::size_t>(q)));
      if (d > best) {
        best = d;
        arg = static_cast<PointId>(i);
      }
    }
    l.push_back(arg);
  }
  return l;
}

}  // namespace

TEST_CASE("farthest point sampling on a line") {
  const auto dm = line({0, 1, 2, 3, 10});
  const Net net = farthest_point_sample(dm, 0, StopRule::landmarks(3));
  CHECK(net.landmark_ids == std::vector<PointId>{0, 4, 3});
  CHECK(net.lambda == 1.0);
}

TEST_CASE("k = n and k = 1") {
  const auto dm = line({0, 1, 2, 3, 10});
  const Net all = farthest_point_sample(dm, 2, StopRule::landmarks(5));
  CHECK(all.size() == 5);
  CHECK(all.lambda == 0.0);
  const Net one = farthest_point_sample(dm, 2, StopRule::landmarks(1));
  CHECK(one.landmark_ids == std::vector<PointId>{2});
  CHECK(one.lambda == 8.0);
}

TEST_CASE("radius stop") {
  const auto dm = line({0, 1, 2, 3, 10});
  const Net net = farthest_point_sample(dm, 0, StopRule::covering(1.5));
  CHECK(net.lambda <= 1.5);
  CHECK(net.landmark_ids == std::vector<PointId>{0, 4, 3});
}

TEST_CASE("bad inputs") {
  CHECK_THROWS_AS(farthest_point_sample(DistanceMatrix(), 0, StopRule::landmarks(1)), InputError);
  const auto dm = line({0, 1});
  CHECK_THROWS_AS(farthest_point_sample(dm, 5, StopRule::landmarks(1)), InputError);
  CHECK(farthest_point_sample(dm, 0, StopRule{}).size() == 2);
  CHECK_THROWS_AS(farthest_point_sample(dm, 0, StopRule::landmarks(3)), InputError);
  CHECK_THROWS_AS(farthest_point_sample(dm, 0, StopRule::covering(0.0)), InputError);
}

TEST_CASE("net invariants on random clouds") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto dm = from_point_cloud(testing::random_cloud(120, 2, seed));
    const Net net = farthest_point_sample(dm, static_cast<PointId>(seed), StopRule::landmarks(15));
    CHECK(net.landmark_ids == naive_fps(dm, static_cast<PointId>(seed), 15));
    for (std::size_t i = 0; i < dm.size(); ++i) {
      double d = std::numeric_limits<double>::infinity();
      for (PointId q : net.landmark_ids) d = std::min(d, dm.dist(i, static_cast<std::size_t>(q)));
      CHECK(d <= net.lambda);
    }
    for (std::size_t a = 0; a < net.size(); ++a)
      for (std::size_t b = a + 1; b < net.size(); ++b)
        CHECK(dm.dist(static_cast<std::size_t>(net.landmark_ids[a]), static_cast<std::size_t>(net.landmark_ids[b])) >=
              net.lambda);
    for (std::size_t i = 1; i < net.insertion_radius.size(); ++i)
      CHECK(net.insertion_radius[i] <= net.insertion_radius[i - 1]);
    for (double l : net.nearest_dist) CHECK(l >= net.lambda);
    CHECK(net.witness_ids.size() == dm.size());
  }
}

TEST_CASE("nearest landmark distance") {
  SUBCASE("line") {
    const auto dm = line({0, 3, 10});
    const Net net = make_net(dm, {0, 1, 2});
    const auto l = compute_nearest_landmark_dist(net, dm);
    CHECK(l[1] == 3.0);
    CHECK(l[0] == 3.0);
    CHECK(l[2] == 7.0);
  }
  SUBCASE("pair") {
    const auto dm = line({0, 5});
    const Net net = make_net(dm, {1, 0});
    CHECK(compute_nearest_landmark_dist(net, dm) == std::vector<double>{5.0, 5.0});
  }
  SUBCASE("equilateral") {
    const auto dm = distance_matrix_from_table({{0, 2, 2}, {2, 0, 2}, {2, 2, 0}});
    const Net net = make_net(dm, {0, 1, 2});
    CHECK(compute_nearest_landmark_dist(net, dm) == std::vector<double>{2.0, 2.0, 2.0});
  }
  SUBCASE("single landmark") {
    const auto dm = line({0, 5});
    CHECK_THROWS_AS(compute_nearest_landmark_dist(make_net(dm, {0}), dm), Error);
  }
}

TEST_CASE("neighborhood") {
  const auto dm = line({0, 1, 2, 3, 4});
  const Net net = make_net(dm, {0, 1, 2, 3, 4});
  CHECK(neighborhood(net, dm, 2, 3).members == std::vector<PointId>{2, 1, 3});
  CHECK(neighborhood(net, dm, 2, 10).members.size() == 5);
  CHECK(neighborhood(net, dm, 2, 1).members == std::vector<PointId>{2});
  CHECK_THROWS_AS(neighborhood(net, dm, 2, 0), InputError);
}

TEST_CASE("default cap") {
  CHECK(default_cap(1, CapMode::theoretical).cap == 66);
  CHECK(default_cap(2, CapMode::theoretical).cap == 4356);
  CHECK(default_cap(2, CapMode::practical).cap == 32);
  CHECK(default_cap(1, CapMode::practical).cap == 18);
  CHECK(default_cap(2, CapMode::practical, 7).cap == 7);
  const CapResult big = default_cap(8, CapMode::theoretical);
  CHECK(big.saturated);
  CHECK(big.cap == kMaxTheoreticalCap);
}

TEST_CASE("ordinal map") {
  const auto dm = line({0, 1, 2, 3});
  const Net net = make_net(dm, {3, 1});
  const auto ord = net.ordinal_map(4);
  CHECK(ord == std::vector<std::int32_t>{-1, 1, -1, 0});
}

TEST_CASE("sample spacing estimate") {
  const auto dm = line({0, 0.5, 1, 1.5, 2, 2.5, 3});
  const Net net = make_net(dm, {0, 6, 3});
  CHECK(estimate_sample_spacing(net, dm) == doctest::Approx(0.5));
}
