#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "distwit/netsel.hpp"
#include "distwit/simplexgeo.hpp"
#include "distwit/weightedgeo.hpp"

namespace distwit {

/// Parameters of the weight assignment loop.
struct WeightParams {
  int m = 1;
  double gamma0 = 0.05;
  double delta0 = 0.1;
  double alpha0 = 0.4;
  double eta = 0.0;      // absolute interval length (squared-length units)
  std::size_t cap = 18;  // N1, neighborhood size
  bool theoretical = false;
  unsigned threads = 1;

  /// sqrt(alpha0^2 - delta0^2)
  double alpha_tilde() const;
  /// Throws InputError unless 0 < Gamma0 < 1, 0 <= delta0 < alpha0 < 1/2.
  void validate() const;
};

/// Practical defaults: Gamma0 = 0.1/(m+1), eta* = 0.01, N1 = 2(m+2)^2.
WeightParams practical_params(int m, double lambda);

/// Gamma0-slivers through `focus` with vertices in N(focus), dimension
/// 2..m+1 and diameter at most 16 lambda.
struct CandidateSet {
  PointId focus = -1;
  std::vector<Simplex> simplices;  // dimension ascending, lexicographic
  std::size_t examined = 0;        // subsets enumerated
};

CandidateSet candidate_simplices(const DistanceMatrix& dm, const Net& net, PointId p, double gamma0, int m,
                                 std::size_t cap);

struct LandmarkWeightRecord {
  PointId landmark = -1;
  double w2 = 0.0;
  double cap = 0.0;                // alpha~0^2 L(p)^2
  std::size_t intervals = 0;       // candidate simplices of p
  double forbidden_measure = 0.0;  // measure of the union of intervals
  double free_fraction = 1.0;      // 1 - |union ∩ [0, cap]| / cap
};

struct WeightLog {
  std::vector<LandmarkWeightRecord> records;  // insertion order
  double eta = 0.0;
  std::size_t total_candidates = 0;
  std::size_t measure_bound_violations = 0;   // union measure > #candidates * eta
  std::size_t theoretical_measure_violations = 0;  // union measure >= alpha~0^2 lambda^2 (theoretical mode)
  std::size_t altitude_bound_violations = 0;  // sliver with D(p,s) >= 2 Gamma0 Delta^2 / L
  std::size_t slivers_checked = 0;
  std::size_t degenerate_skipped = 0;
  double relative_amplitude = 0.0;
};

/// The forbidden union covers [0, alpha~0^2 L(p)^2].
class NoFreeWeight : public Error {
 public:
  NoFreeWeight(PointId landmark, double cap, std::vector<ForbiddenInterval> covering);
  PointId landmark() const { return landmark_; }
  double cap() const { return cap_; }
  const std::vector<ForbiddenInterval>& intervals() const { return intervals_; }

 private:
  PointId landmark_;
  double cap_;
  std::vector<ForbiddenInterval> intervals_;
};

/// Smallest x in [0, cap] strictly outside every closed interval, or nullopt.
std::optional<double> smallest_free_value(std::vector<std::pair<double, double>> intervals, double cap);

/// Measure of the union of intervals, optionally clipped to [lo, hi].
double union_measure(std::vector<std::pair<double, double>> intervals, std::optional<std::pair<double, double>> clip = {});

/// Visits landmarks in insertion order and picks for each the smallest
/// squared weight in [0, alpha~0^2 L(p)^2] outside the forbidden intervals of
/// its candidate simplices, computed under the weights chosen so far.
std::pair<WeightAssignment, WeightLog> assign_weights(const DistanceMatrix& dm, const Net& net,
                                                      const WeightParams& params);

struct Feasibility {
  bool pass = false;
  double lhs = 0.0;    // Gamma0 + delta0^2 / Gamma0^m
  double rhs = 0.0;    // alpha~0^2 / (2^14 N)
  double n_bound = 0;  // N = sum_{j=2}^{m+1} N1^j
  double slack = 0.0;  // 1 - lhs / rhs, positive iff pass
};

Feasibility feasibility_check(double gamma0, double delta0, double alpha_tilde, int m, double n1);

struct StabilityFinding {
  PointId landmark = -1;
  Simplex simplex;
  double perturbed_w2 = 0.0;
  ForbiddenInterval interval;
};

struct StabilityReport {
  std::size_t landmarks_checked = 0;
  std::size_t simplices_checked = 0;
  std::vector<StabilityFinding> findings;
};

/// For the first `sample` landmarks, scans `grid` squared weights in
/// [omega(p)^2, omega(p)^2 + delta0^2 lambda^2] and reports candidate slivers
/// whose forbidden interval (under the final weights) contains one of them.
StabilityReport stability_audit(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w,
                                const WeightParams& params, std::size_t sample, std::size_t grid);

}  // namespace distwit
