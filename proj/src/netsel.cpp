#include "distwit/netsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace distwit {

std::vector<std::int32_t> Net::ordinal_map(std::size_t n_points) const {
  std::vector<std::int32_t> ord(n_points, -1);
  for (std::size_t i = 0; i < landmark_ids.size(); ++i) ord[static_cast<std::size_t>(landmark_ids[i])] = static_cast<std::int32_t>(i);
  return ord;
}

Net farthest_point_sample(const DistanceMatrix& dm, PointId seed, StopRule stop) {
  const std::size_t n = dm.size();
  if (n == 0) throw InputError("netsel", "empty input");
  if (seed < 0 || static_cast<std::size_t>(seed) >= n) throw InputError("netsel", "seed index out of range");
  if (stop.count && (*stop.count == 0 || *stop.count > n))
    throw InputError("netsel", "landmark count must be in [1, n]");
  if (stop.radius && !(*stop.radius > 0.0)) throw InputError("netsel", "stop radius must be positive");
  if (!stop.count && !stop.radius) stop.count = n;

  Net net;
  std::vector<double> to_set(n);
  for (std::size_t j = 0; j < n; ++j) to_set[j] = dm.d2(static_cast<std::size_t>(seed), j);
  net.landmark_ids.push_back(seed);
  net.insertion_radius.push_back(std::numeric_limits<double>::infinity());

  const double stop_r2 = stop.radius ? (*stop.radius) * (*stop.radius) : -1.0;
  while (true) {
    // argmax with smallest-index tie break
    std::size_t best = 0;
    for (std::size_t j = 1; j < n; ++j)
      if (to_set[j] > to_set[best]) best = j;
    const double r2 = to_set[best];
    if (stop.count && net.size() >= *stop.count) break;
    if (r2 <= stop_r2 || r2 == 0.0) break;
    net.landmark_ids.push_back(static_cast<PointId>(best));
    net.insertion_radius.push_back(std::sqrt(r2));
    for (std::size_t j = 0; j < n; ++j) to_set[j] = std::min(to_set[j], dm.d2(best, j));
  }
  net.lambda = std::sqrt(*std::max_element(to_set.begin(), to_set.end()));
  net.witness_ids.resize(n);
  std::iota(net.witness_ids.begin(), net.witness_ids.end(), 0);
  if (net.size() >= 2) net.nearest_dist = compute_nearest_landmark_dist(net, dm);
  return net;
}

Net make_net(const DistanceMatrix& dm, std::vector<PointId> landmark_ids) {
  const std::size_t n = dm.size();
  if (landmark_ids.empty()) throw InputError("netsel", "empty landmark list");
  std::vector<double> to_set(n, std::numeric_limits<double>::infinity());
  Net net;
  for (PointId p : landmark_ids) {
    if (p < 0 || static_cast<std::size_t>(p) >= n) throw InputError("netsel", "landmark id out of range");
    double r2 = to_set[static_cast<std::size_t>(p)];
    if (r2 == 0.0) throw InputError("netsel", "duplicate landmark " + std::to_string(p));
    net.insertion_radius.push_back(std::sqrt(r2));
    for (std::size_t j = 0; j < n; ++j) to_set[j] = std::min(to_set[j], dm.d2(static_cast<std::size_t>(p), j));
  }
  net.landmark_ids = std::move(landmark_ids);
  net.lambda = std::sqrt(*std::max_element(to_set.begin(), to_set.end()));
  net.witness_ids.resize(n);
  std::iota(net.witness_ids.begin(), net.witness_ids.end(), 0);
  if (net.size() >= 2) net.nearest_dist = compute_nearest_landmark_dist(net, dm);
  return net;
}

std::vector<double> compute_nearest_landmark_dist(const Net& net, const DistanceMatrix& dm) {
  if (net.size() < 2) throw InputError("netsel", "L(p) needs at least two landmarks");
  std::vector<double> out(net.size(), std::numeric_limits<double>::infinity());
  for (std::size_t a = 0; a < net.size(); ++a)
    for (std::size_t b = 0; b < net.size(); ++b)
      if (a != b)
        out[a] = std::min(out[a], dm.d2(static_cast<std::size_t>(net.landmark_ids[a]),
                                        static_cast<std::size_t>(net.landmark_ids[b])));
  for (double& v : out) v = std::sqrt(v);
  return out;
}

Neighborhood neighborhood(const Net& net, const DistanceMatrix& dm, PointId p, std::size_t cap) {
  if (cap == 0) throw InputError("netsel", "neighborhood cap must be >= 1");
  std::vector<std::pair<double, PointId>> keyed;
  keyed.reserve(net.size());
  for (PointId q : net.landmark_ids) keyed.emplace_back(dm.d2(static_cast<std::size_t>(p), static_cast<std::size_t>(q)), q);
  const std::size_t k = std::min(cap, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
  Neighborhood nb{p, {}, cap};
  nb.members.reserve(k);
  for (std::size_t i = 0; i < k; ++i) nb.members.push_back(keyed[i].second);
  return nb;
}

CapResult default_cap(int m, CapMode mode, std::optional<std::size_t> practical, std::size_t max_cap) {
  if (m < 1) throw InputError("netsel", "intrinsic dimension must be >= 1");
  if (mode == CapMode::practical) {
    const auto mm = static_cast<std::size_t>(m + 2);
    return {practical.value_or(2 * mm * mm), false};
  }
  std::size_t cap = 1;
  for (int i = 0; i < m; ++i) {
    if (cap > max_cap / 66) return {max_cap, true};
    cap *= 66;
  }
  if (cap > max_cap) return {max_cap, true};
  return {cap, false};
}

double estimate_sample_spacing(const Net& net, const DistanceMatrix& dm, std::size_t bucket_neighbors) {
  const std::size_t n = dm.size();
  if (n < 2) return 0.0;
  const std::size_t nl = net.size();
  std::vector<std::vector<PointId>> bucket(nl);
  for (std::size_t w = 0; w < n; ++w) {
    std::size_t best = 0;
    for (std::size_t a = 1; a < nl; ++a)
      if (dm.d2(w, static_cast<std::size_t>(net.landmark_ids[a])) <
          dm.d2(w, static_cast<std::size_t>(net.landmark_ids[best])))
        best = a;
    bucket[best].push_back(static_cast<PointId>(w));
  }
  auto ord = net.ordinal_map(n);
  double worst = 0.0;
  for (std::size_t a = 0; a < nl; ++a) {
    auto nb = neighborhood(net, dm, net.landmark_ids[a], bucket_neighbors + 1);
    for (PointId w : bucket[a]) {
      double best = std::numeric_limits<double>::infinity();
      for (PointId q : nb.members)
        for (PointId v : bucket[static_cast<std::size_t>(ord[static_cast<std::size_t>(q)])])
          if (v != w) best = std::min(best, dm.d2(static_cast<std::size_t>(w), static_cast<std::size_t>(v)));
      if (std::isfinite(best)) worst = std::max(worst, best);
    }
  }
  return std::sqrt(worst);
}

}  // namespace distwit
