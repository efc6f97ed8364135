#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>

#include "distwit/synth.hpp"
#include "distwit/weights.hpp"
#include "distwit/witness.hpp"
#include "support.hpp"

using namespace distwit;

namespace {

struct Fixture {
  DistanceMatrix dm;
  Net net;
};

// Noisy sphere with enough flat quadruples to produce slivers.
Fixture sphere_fixture(std::size_t n = 1500, std::size_t landmarks = 60, double scale = 1.0) {
  SamplerSpec spec;
  spec.shape = ShapeKind::sphere2;
  spec.n = n;
  spec.seed = 3;
  spec.R = scale;
  spec.estimate_coverage = false;
  Fixture f;
  f.dm = from_point_cloud(sample(spec).cloud);
  f.net = farthest_point_sample(f.dm, 0, StopRule::landmarks(landmarks));
  return f;
}

WeightParams sphere_params(double lambda) {
  WeightParams p = practical_params(2, lambda);
  p.gamma0 = 0.3;
  p.eta = 0.01 * lambda * lambda;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  WeightParams p;
  p.eta = 0.1;
  CHECK_NOTHROW(p.validate());
  p.alpha0 = 0.5;
  CHECK_THROWS_AS(p.validate(), InputError);
  p.alpha0 = 0.4;
  p.delta0 = 0.4;
  CHECK_THROWS_AS(p.validate(), InputError);
  p.delta0 = 0.1;
  p.gamma0 = 1.0;
  CHECK_THROWS_AS(p.validate(), InputError);
  p.gamma0 = 0.05;
  CHECK(p.alpha_tilde() == doctest::Approx(std::sqrt(0.16 - 0.01)));
}

TEST_CASE("practical defaults") {
  const WeightParams p = practical_params(2, 0.5);
  CHECK(p.gamma0 == doctest::Approx(0.1 / 3));
  CHECK(p.cap == 32);
  CHECK(p.eta == doctest::Approx(0.01 * 0.25));
  CHECK(p.delta0 == 0.1);
  CHECK(p.alpha0 == 0.4);
}

TEST_CASE("smallest free value") {
  CHECK(smallest_free_value({{0.4, 0.6}}, 1.0) == 0.0);
  const auto x = smallest_free_value({{-0.1, 0.1}}, 1.0);
  REQUIRE(x);
  CHECK(*x > 0.1);
  CHECK(*x == doctest::Approx(0.1 + 1e-12).epsilon(1e-15));
  CHECK(smallest_free_value({{-0.1, 0.5}, {0.4, 0.7}}, 1.0).value() > 0.7);
  CHECK(smallest_free_value({{-0.1, 0.5}, {0.6, 0.7}}, 1.0).value() == doctest::Approx(0.5));
  CHECK_FALSE(smallest_free_value({{-0.1, 0.5}, {0.5, 1.2}}, 1.0));
  CHECK(smallest_free_value({}, 1.0) == 0.0);
}

TEST_CASE("union measure") {
  CHECK(union_measure({{0, 1}, {0.5, 2}, {3, 4}}) == doctest::Approx(3.0));
  CHECK(union_measure({{-1, 1}, {0.5, 2}}, std::pair{0.0, 1.5}) == doctest::Approx(1.5));
  CHECK(union_measure({}) == 0.0);
}

TEST_CASE("candidate simplices") {
  SUBCASE("all good") {
    const auto dm = distance_matrix_from_table({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    const Net net = make_net(dm, {0, 1, 2});
    CHECK(candidate_simplices(dm, net, 0, 0.5, 1, 10).simplices.empty());
  }
  SUBCASE("near-collinear triple") {
    const auto dm = from_point_cloud(testing::cloud(2, {0, 0, 1, 0.01, 2, 0, 1, 1.5}));
    const Net net = make_net(dm, {1, 0, 2});
    CHECK(net.lambda > 1.0);
    const auto c = candidate_simplices(dm, net, 1, 0.5, 1, 10);
    REQUIRE(c.simplices.size() == 1);
    CHECK(c.simplices[0] == Simplex{0, 1, 2});
    CHECK(classify(dm, c.simplices[0], 0.5) == Shape::sliver);
    CHECK(thickness(dm, c.simplices[0]) < 0.25);
  }
  SUBCASE("diameter filter") {
    // same triple, but lambda made tiny so 16 lambda < diameter
    const auto dm = from_point_cloud(testing::cloud(2, {0, 0, 1, 0.01, 2, 0, 0.01, 0}));
    const Net net = make_net(dm, {1, 0, 2});
    CHECK(16 * net.lambda < 2.0);
    CHECK(candidate_simplices(dm, net, 1, 0.5, 1, 10).simplices.empty());
  }
  SUBCASE("invariants on a sphere sample") {
    const Fixture f = sphere_fixture();
    for (std::size_t i = 0; i < f.net.size(); i += 5) {
      const PointId p = f.net.landmark_ids[i];
      const auto c = candidate_simplices(f.dm, f.net, p, 0.3, 2, 32);
      const auto nb = neighborhood(f.net, f.dm, p, 32).members;
      for (const Simplex& s : c.simplices) {
        CHECK(std::binary_search(s.begin(), s.end(), p));
        CHECK(classify(f.dm, s, 0.3) == Shape::sliver);
        CHECK(diameter(f.dm, s) <= 16 * f.net.lambda);
        CHECK(s.size() >= 3);
        CHECK(s.size() <= 4);
        for (PointId v : s) CHECK(std::find(nb.begin(), nb.end(), v) != nb.end());
      }
      CHECK(std::is_sorted(c.simplices.begin(), c.simplices.end(),
                           [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); }));
    }
  }
}

TEST_CASE("no candidates gives zero weights") {
  SamplerSpec spec;
  spec.n = 200;
  spec.estimate_coverage = false;
  const auto dm = from_point_cloud(sample(spec).cloud);
  const Net net = farthest_point_sample(dm, 0, StopRule::landmarks(12));
  const auto [w, log] = assign_weights(dm, net, practical_params(1, net.lambda));
  CHECK(log.total_candidates == 0);
  for (PointId p : net.landmark_ids) CHECK(w.w2(p) == 0.0);
  CHECK(log.relative_amplitude == 0.0);
}

TEST_CASE("assigned weights respect their invariants") {
  const Fixture f = sphere_fixture();
  const WeightParams params = sphere_params(f.net.lambda);
  const auto [w, log] = assign_weights(f.dm, f.net, params);
  CHECK(log.total_candidates > 0);
  CHECK(log.measure_bound_violations == 0);
  CHECK(log.altitude_bound_violations == 0);
  CHECK(log.relative_amplitude <= params.alpha_tilde());
  REQUIRE(log.records.size() == f.net.size());
  for (std::size_t i = 0; i < f.net.size(); ++i) {
    const auto& rec = log.records[i];
    CHECK(rec.landmark == f.net.landmark_ids[i]);
    CHECK(rec.w2 >= 0.0);
    CHECK(rec.w2 <= rec.cap);
    CHECK(rec.cap == doctest::Approx(testing::sq(params.alpha_tilde() * f.net.nearest_dist[i])));
    CHECK(rec.forbidden_measure <= static_cast<double>(rec.intervals) * params.eta * (1 + 1e-12));
    CHECK(rec.free_fraction >= 0.0);
  }
  CHECK(w.relative_amplitude(f.net) == log.relative_amplitude);

  SUBCASE("each weight avoids the intervals it was chosen against") {
    // replay the loop with an independent sequential implementation
    WeightAssignment replay(f.dm.size());
    for (std::size_t i = 0; i < f.net.size(); ++i) {
      const PointId p = f.net.landmark_ids[i];
      const auto c = candidate_simplices(f.dm, f.net, p, params.gamma0, params.m, params.cap);
      for (const Simplex& s : c.simplices) {
        if (is_degenerate(f.dm, opposite_face(s, p))) continue;
        const auto iv = forbidden_interval(f.dm, s, p, replay, params.eta);
        CHECK_FALSE(iv.contains(w.w2(p)));
      }
      replay.set_w2(p, w.w2(p));
    }
  }
}

TEST_CASE("sliver altitude bound on every candidate") {
  const Fixture f = sphere_fixture();
  for (PointId p : f.net.landmark_ids) {
    const auto c = candidate_simplices(f.dm, f.net, p, 0.3, 2, 32);
    for (const Simplex& s : c.simplices)
      for (PointId v : s) {
        const Altitude a = altitude(f.dm, s, v);
        CHECK(a.value < 2 * 0.3 * testing::sq(diameter(f.dm, s)) / shortest_edge(f.dm, s));
      }
  }
}

TEST_CASE("determinism across thread counts") {
  const Fixture f = sphere_fixture();
  WeightParams params = sphere_params(f.net.lambda);
  params.threads = 1;
  const auto a = assign_weights(f.dm, f.net, params).first;
  params.threads = 4;
  const auto b = assign_weights(f.dm, f.net, params).first;
  CHECK(a.values() == b.values());
}

TEST_CASE("scaling metamorphic") {
  const Fixture f1 = sphere_fixture(1500, 60, 1.0);
  const Fixture f2 = sphere_fixture(1500, 60, 4.0);
  CHECK(f1.net.landmark_ids == f2.net.landmark_ids);
  const auto [w1, l1] = assign_weights(f1.dm, f1.net, sphere_params(f1.net.lambda));
  const auto [w2, l2] = assign_weights(f2.dm, f2.net, sphere_params(f2.net.lambda));
  for (PointId p : f1.net.landmark_ids) CHECK(w2.w2(p) == doctest::Approx(16.0 * w1.w2(p)).epsilon(1e-6));
  CHECK(build_witness_complex(f1.dm, f1.net, w1, 2) == build_witness_complex(f2.dm, f2.net, w2, 2));
}

TEST_CASE("no free weight") {
  const Fixture f = sphere_fixture();
  WeightParams params = sphere_params(f.net.lambda);
  params.eta = 10.0 * f.net.lambda * f.net.lambda;
  try {
    assign_weights(f.dm, f.net, params);
    FAIL("expected NoFreeWeight");
  } catch (const NoFreeWeight& e) {
    CHECK(e.module() == "weights");
    CHECK_FALSE(e.intervals().empty());
    CHECK(union_measure([&] {
            std::vector<std::pair<double, double>> v;
            for (const auto& iv : e.intervals()) v.emplace_back(iv.lo, iv.hi);
            return v;
          }(), std::pair{0.0, e.cap()}) == doctest::Approx(e.cap()));
  }
}

TEST_CASE("feasibility") {
  const auto f = feasibility_check(std::ldexp(1.0, -30), std::sqrt(std::ldexp(1.0, -65)), std::sqrt(0.2), 1, 66);
  CHECK(f.n_bound == 4356);
  CHECK(f.lhs == doctest::Approx(9.6e-10).epsilon(0.01));
  CHECK(f.rhs == doctest::Approx(2.8e-9).epsilon(0.01));
  CHECK(f.pass);
  CHECK(f.slack > 0.0);
  for (int m = 1; m <= 3; ++m) CHECK_FALSE(feasibility_check(0.5, 0.1, 0.3, m, 66).pass);
  CHECK(feasibility_check(1e-14, 0.0, 0.3, 1, 66).pass);
  CHECK(feasibility_check(0.5, 0.1, 0.3, 1, 66).slack < 0.0);
}

TEST_CASE("stability audit") {
  const Fixture f = sphere_fixture();
  const WeightParams params = sphere_params(f.net.lambda);
  const auto [w, log] = assign_weights(f.dm, f.net, params);
  CHECK(stability_audit(f.dm, f.net, w, params, f.net.size(), 0).findings.empty());
  // only the first landmark's intervals are computed under exactly the
  // weights it was chosen against (all others still zero)
  WeightAssignment first(f.dm.size());
  first.set_w2(f.net.landmark_ids[0], w.w2(f.net.landmark_ids[0]));
  const auto clean = stability_audit(f.dm, f.net, first, params, 1, 1);
  CHECK(clean.findings.empty());

  // force a weight into one of its forbidden intervals
  PointId target = -1;
  ForbiddenInterval iv;
  for (PointId p : f.net.landmark_ids) {
    const auto c = candidate_simplices(f.dm, f.net, p, params.gamma0, params.m, params.cap);
    for (const Simplex& s : c.simplices) {
      iv = forbidden_interval(f.dm, s, p, WeightAssignment(f.dm.size()), params.eta);
      if (iv.hi > 0.0) {
        target = p;
        break;
      }
    }
    if (target >= 0) break;
  }
  REQUIRE(target >= 0);
  WeightAssignment forced(f.dm.size());
  forced.set_w2(target, std::max(0.0, 0.5 * (iv.lo + iv.hi)));
  Net reordered = f.net;
  std::rotate(reordered.landmark_ids.begin(),
              std::find(reordered.landmark_ids.begin(), reordered.landmark_ids.end(), target),
              reordered.landmark_ids.end());
  const auto rep = stability_audit(f.dm, reordered, forced, params, 1, 1);
  CHECK_FALSE(rep.findings.empty());
  CHECK(rep.findings.front().landmark == target);
}

TEST_CASE("theoretical mode at m = 1") {
  SamplerSpec spec;
  spec.n = 300;
  spec.estimate_coverage = false;
  const auto dm = from_point_cloud(sample(spec).cloud);
  const Net net = farthest_point_sample(dm, 0, StopRule::landmarks(16));
  WeightParams p;
  p.m = 1;
  p.gamma0 = std::ldexp(1.0, -30);
  p.delta0 = std::sqrt(std::ldexp(1.0, -65));
  p.alpha0 = std::sqrt(0.2 + testing::sq(p.delta0));
  p.cap = default_cap(1, CapMode::theoretical).cap;
  p.eta = eta(p.gamma0, p.delta0, 1, net.lambda, EtaMode::theoretical);
  p.theoretical = true;
  const auto [w, log] = assign_weights(dm, net, p);
  CHECK(log.theoretical_measure_violations == 0);
  CHECK(log.measure_bound_violations == 0);
}
