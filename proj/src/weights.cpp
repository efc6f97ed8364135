#include "distwit/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "distwit/parallel.hpp"

namespace distwit {

double WeightParams::alpha_tilde() const { return std::sqrt(alpha0 * alpha0 - delta0 * delta0); }

void WeightParams::validate() const {
  if (m < 1) throw InputError("weights", "m must be >= 1");
  if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw InputError("weights", "Gamma0 must lie in (0, 1)");
  if (!(alpha0 > 0.0 && alpha0 < 0.5)) throw InputError("weights", "alpha0 must lie in (0, 1/2)");
  if (!(delta0 >= 0.0 && delta0 < alpha0)) throw InputError("weights", "delta0 must lie in [0, alpha0)");
  if (!(eta >= 0.0)) throw InputError("weights", "eta must be nonnegative");
  if (cap < 1) throw InputError("weights", "neighborhood cap must be >= 1");
}

WeightParams practical_params(int m, double lambda) {
  WeightParams p;
  p.m = m;
  p.gamma0 = 0.1 / (m + 1);
  p.delta0 = 0.1;
  p.alpha0 = 0.4;
  p.eta = eta(p.gamma0, p.delta0, m, lambda, EtaMode::practical, 0.01);
  p.cap = default_cap(m, CapMode::practical).cap;
  return p;
}

CandidateSet candidate_simplices(const DistanceMatrix& dm, const Net& net, PointId p, double gamma0, int m,
                                 std::size_t cap) {
  CandidateSet out;
  out.focus = p;
  const Neighborhood nb = neighborhood(net, dm, p, cap);
  std::vector<PointId> others;
  for (PointId q : nb.members)
    if (q != p) others.push_back(q);
  std::sort(others.begin(), others.end());

  const double max_d2 = 256.0 * net.lambda * net.lambda;  // (16 lambda)^2
  ShapeClassifier classifier(dm, gamma0);
  for (std::size_t size = 2; size <= static_cast<std::size_t>(m) + 1; ++size) {
    std::vector<Simplex> found;
    for_each_face(others, size, [&](const Simplex& combo) {
      ++out.examined;
      for (std::size_t i = 0; i < combo.size(); ++i) {
        if (dm.d2(static_cast<std::size_t>(p), static_cast<std::size_t>(combo[i])) > max_d2) return;
        for (std::size_t j = i + 1; j < combo.size(); ++j)
          if (dm.d2(static_cast<std::size_t>(combo[i]), static_cast<std::size_t>(combo[j])) > max_d2) return;
      }
      Simplex s = combo;
      s.insert(std::upper_bound(s.begin(), s.end(), p), p);
      if (classifier.classify(s) == Shape::sliver) found.push_back(std::move(s));
    });
    std::sort(found.begin(), found.end());
    out.simplices.insert(out.simplices.end(), found.begin(), found.end());
  }
  return out;
}

NoFreeWeight::NoFreeWeight(PointId landmark, double cap, std::vector<ForbiddenInterval> covering)
    : Error("weights", "no free weight for landmark " + std::to_string(landmark) + ": " +
                           std::to_string(covering.size()) + " forbidden intervals cover [0, " + std::to_string(cap) +
                           "]"),
      landmark_(landmark),
      cap_(cap),
      intervals_(std::move(covering)) {}

std::optional<double> smallest_free_value(std::vector<std::pair<double, double>> intervals, double cap) {
  std::sort(intervals.begin(), intervals.end());
  const double step = 1e-12 * cap;
  double x = 0.0;
  for (const auto& [lo, hi] : intervals) {
    if (lo > x) break;
    if (hi >= x) x = std::max(hi + step, std::nextafter(hi, std::numeric_limits<double>::infinity()));
  }
  if (x > cap) return std::nullopt;
  return x;
}

double union_measure(std::vector<std::pair<double, double>> intervals, std::optional<std::pair<double, double>> clip) {
  if (clip)
    for (auto& [lo, hi] : intervals) {
      lo = std::max(lo, clip->first);
      hi = std::min(hi, clip->second);
    }
  std::erase_if(intervals, [](const auto& iv) { return iv.second <= iv.first; });
  std::sort(intervals.begin(), intervals.end());
  double total = 0.0;
  double cur_lo = 0.0, cur_hi = -std::numeric_limits<double>::infinity();
  for (const auto& [lo, hi] : intervals) {
    if (lo > cur_hi) {
      if (std::isfinite(cur_hi)) total += cur_hi - cur_lo;
      cur_lo = lo;
      cur_hi = hi;
    } else {
      cur_hi = std::max(cur_hi, hi);
    }
  }
  if (std::isfinite(cur_hi)) total += cur_hi - cur_lo;
  return total;
}

std::pair<WeightAssignment, WeightLog> assign_weights(const DistanceMatrix& dm, const Net& net,
                                                      const WeightParams& params) {
  params.validate();
  WeightAssignment w(dm.size());
  WeightLog log;
  log.eta = params.eta;
  if (net.size() < 2) return {w, log};

  // S(p) depends only on shapes, not on weights, so it is computed up front.
  std::vector<CandidateSet> candidates(net.size());
  parallel_for(net.size(), params.threads, [&](std::size_t i) {
    candidates[i] = candidate_simplices(dm, net, net.landmark_ids[i], params.gamma0, params.m, params.cap);
  });

  const double a2 = params.alpha_tilde() * params.alpha_tilde();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const PointId p = net.landmark_ids[i];
    const double cap = a2 * net.nearest_dist[i] * net.nearest_dist[i];
    std::vector<ForbiddenInterval> intervals;
    for (const Simplex& s : candidates[i].simplices) {
      ++log.slivers_checked;
      const double delta = diameter(dm, s), shortest = shortest_edge(dm, s);
      for (PointId v : s)
        if (!(altitude(dm, s, v).value < 2.0 * params.gamma0 * delta * delta / shortest)) {
          ++log.altitude_bound_violations;
          break;
        }
      try {
        intervals.push_back(forbidden_interval(dm, s, p, w, params.eta));
      } catch (const DegenerateError&) {
        ++log.degenerate_skipped;
      }
    }

    std::vector<std::pair<double, double>> spans;
    spans.reserve(intervals.size());
    for (const auto& iv : intervals) spans.emplace_back(iv.lo, iv.hi);
    LandmarkWeightRecord rec;
    rec.landmark = p;
    rec.cap = cap;
    rec.intervals = intervals.size();
    rec.forbidden_measure = union_measure(spans);
    rec.free_fraction = cap > 0.0 ? 1.0 - union_measure(spans, std::pair{0.0, cap}) / cap : 0.0;
    if (rec.forbidden_measure > static_cast<double>(intervals.size()) * params.eta * (1.0 + 1e-12))
      ++log.measure_bound_violations;
    if (params.theoretical && rec.forbidden_measure >= a2 * net.lambda * net.lambda)
      ++log.theoretical_measure_violations;

    auto x = smallest_free_value(spans, cap);
    if (!x) throw NoFreeWeight(p, cap, std::move(intervals));
    w.set_w2(p, *x);
    rec.w2 = *x;
    log.total_candidates += intervals.size();
    log.records.push_back(rec);
  }
  log.relative_amplitude = w.relative_amplitude(net);
  return {w, log};
}

Feasibility feasibility_check(double gamma0, double delta0, double alpha_tilde, int m, double n1) {
  Feasibility f;
  for (int j = 2; j <= m + 1; ++j) f.n_bound += std::pow(n1, j);
  f.lhs = gamma0 + delta0 * delta0 / std::pow(gamma0, m);
  f.rhs = alpha_tilde * alpha_tilde / (16384.0 * f.n_bound);
  f.pass = f.lhs < f.rhs;
  f.slack = 1.0 - f.lhs / f.rhs;
  return f;
}

StabilityReport stability_audit(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w,
                                const WeightParams& params, std::size_t sample, std::size_t grid) {
  StabilityReport rep;
  if (grid == 0 || net.size() < 2) return rep;
  const double span = params.delta0 * params.delta0 * net.lambda * net.lambda;
  for (std::size_t i = 0; i < std::min(sample, net.size()); ++i) {
    const PointId p = net.landmark_ids[i];
    ++rep.landmarks_checked;
    const auto cands = candidate_simplices(dm, net, p, params.gamma0, params.m, params.cap);
    for (const Simplex& s : cands.simplices) {
      ++rep.simplices_checked;
      ForbiddenInterval iv;
      try {
        iv = forbidden_interval(dm, s, p, w, params.eta);
      } catch (const DegenerateError&) {
        continue;
      }
      for (std::size_t g = 0; g < grid; ++g) {
        const double t = grid == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(grid - 1);
        const double xi2 = w.w2(p) + t * span;
        if (iv.contains(xi2)) {
          rep.findings.push_back({p, s, xi2, iv});
          break;
        }
      }
    }
  }
  return rep;
}

}  // namespace distwit
