#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "distwit/dmatrix.hpp"

namespace distwit {

/// Landmark subset L of the witness set W.
struct Net {
  std::vector<PointId> landmark_ids;  // insertion order
  std::vector<double> insertion_radius;  // distance to the previous landmarks when inserted (inf for the seed)
  double lambda = 0.0;  // covering radius of L over W
  std::vector<double> nearest_dist;  // L(p), aligned with landmark_ids; empty if |L| < 2
  std::vector<PointId> witness_ids;  // all of W
  bool witnesses_include_landmarks = true;

  std::size_t size() const { return landmark_ids.size(); }

  /// Landmark ordinal of a point id, or -1.
  std::vector<std::int32_t> ordinal_map(std::size_t n_points) const;
};

/// Farthest-point sampling stops after `count` landmarks or once the covering
/// radius drops to `radius` or below, whichever comes first. With neither,
/// every point is ordered.
struct StopRule {
  std::optional<std::size_t> count;
  std::optional<double> radius;

  static StopRule landmarks(std::size_t k) { return {k, std::nullopt}; }
  static StopRule covering(double r) { return {std::nullopt, r}; }
};

/// Greedy farthest-point sampling, ties broken by the smallest index.
Net farthest_point_sample(const DistanceMatrix& dm, PointId seed, StopRule stop);

/// Net over an explicit landmark list (given order is kept).
Net make_net(const DistanceMatrix& dm, std::vector<PointId> landmark_ids);

/// L(p) = min over the other landmarks, aligned with net.landmark_ids.
std::vector<double> compute_nearest_landmark_dist(const Net& net, const DistanceMatrix& dm);

struct Neighborhood {
  PointId center;
  std::vector<PointId> members;  // ascending (distance, index); center first
  std::size_t cap;
};

/// The `cap` landmarks nearest to `p`, p included.
Neighborhood neighborhood(const Net& net, const DistanceMatrix& dm, PointId p, std::size_t cap);

enum class CapMode { theoretical, practical };

struct CapResult {
  std::size_t cap;
  bool saturated = false;
};

inline constexpr std::size_t kMaxTheoreticalCap = std::size_t{1} << 24;

/// 66^m in theoretical mode, otherwise `practical` (default 2(m+2)^2).
CapResult default_cap(int m, CapMode mode, std::optional<std::size_t> practical = std::nullopt,
                      std::size_t max_cap = kMaxTheoreticalCap);

/// Largest nearest-neighbour distance inside W, searched within the buckets
/// of each witness's nearest landmark and its `bucket_neighbors` nearest
/// landmarks. Diagnostic for "witnesses denser than landmarks".
double estimate_sample_spacing(const Net& net, const DistanceMatrix& dm, std::size_t bucket_neighbors = 8);

}  // namespace distwit
