#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "distwit/dmatrix.hpp"
#include "distwit/netsel.hpp"
#include "distwit/scomplex.hpp"
#include "distwit/weightedgeo.hpp"
#include "distwit/weights.hpp"

namespace distwit {

/// Brute-force weighted Delaunay machinery for small point sets in R^d,
/// d <= 3. Simplices here index rows of the given cloud.

inline constexpr std::size_t kOracleMaxPoints = 64;

/// Two or more weighted distances tie within 1e-9 diameter^2 where the
/// answer depends on them.
class OracleDegeneracy : public Error {
 public:
  OracleDegeneracy(Simplex tuple, const std::string& what)
      : Error("protect_oracle", what + " " + to_string(tuple)), tuple_(std::move(tuple)) {}
  const Simplex& tuple() const { return tuple_; }

 private:
  Simplex tuple_;
};

/// max over c in the weighted normal flat of s of
/// min_{q not in s} [d(c, q^w) - d(c, p0^w)].
struct FaceOptimum {
  double margin = 0.0;  // +inf when unbounded (or no other points)
  std::vector<double> c;
  bool bounded = true;
};

FaceOptimum max_protection_margin(const PointCloud& pts, std::span<const double> w2, const Simplex& s);

/// Margin at a given point c (no optimization).
double protection_margin_at(const PointCloud& pts, std::span<const double> w2, const Simplex& s,
                            std::span<const double> c);

/// s is in Del_w iff some c has equal weighted distance to s and strictly
/// larger to every other point, decided by the linear program above.
bool in_weighted_delaunay(const PointCloud& pts, std::span<const double> w2, const Simplex& s);

/// Weighted Delaunay complex. d-simplices are tested at their weighted
/// center; lower faces come from closure when the points span R^d, and from
/// the linear program otherwise.
SimplicialComplex brute_delaunay(const PointCloud& pts, std::span<const double> w2);

/// Same complex with every simplex decided by the linear program.
SimplicialComplex brute_delaunay_lp(const PointCloud& pts, std::span<const double> w2);

struct ProtectionRecord {
  Simplex simplex;
  std::vector<double> c;
  double protection = 0.0;
  bool is_protected = false;  // protection > delta2
};

ProtectionRecord measure_protection(const PointCloud& pts, std::span<const double> w2, const SimplicialComplex& k,
                                    const Simplex& s, double delta2 = 0.0);

/// True if the cell of p is bounded. Exact in the plane (largest angular gap
/// of the other points below pi) unless `directions` is given; otherwise no
/// sampled direction may let the cell escape to infinity.
bool cell_bounded(const PointCloud& pts, PointId p, std::size_t directions = 0);

struct DecayViolation {
  Simplex simplex;
  double protection = 0.0;
  double required = 0.0;
};

struct VertexDecay {
  PointId vertex = -1;
  bool bounded = false;
  bool hypothesis = false;  // every incident d-simplex protected beyond delta2
  double delta2 = 0.0;      // hypothesis value used
  std::size_t faces_checked = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();  // min protection * (d-j+1) / delta2
  std::vector<DecayViolation> violations;
};

struct DecayReport {
  std::vector<VertexDecay> vertices;
  std::size_t asserted = 0;  // vertices where the hypothesis held
  std::size_t violations() const;
};

/// For each bounded-cell vertex (all vertices if `which` is empty), checks
/// that incident j-simplices are delta2/(d-j+1)-protected whenever every
/// incident d-simplex is delta2-protected. Without `delta2`, each vertex uses
/// the smallest protection among its d-simplices.
DecayReport verify_decay_lemma(const PointCloud& pts, std::span<const double> w2, std::optional<double> delta2 = {},
                               std::span<const PointId> which = {});

struct InclusionReport {
  SimplicialComplex witness;
  SimplicialComplex delaunay;  // over point ids of W
  std::vector<Simplex> violations;
  bool pass() const { return violations.empty(); }
};

/// Wit_w(L, W) built from the distance matrix of W, against Del_w(L) built
/// from coordinates. `w` is indexed by point id of W.
InclusionReport verify_witness_inclusion(const PointCloud& W, std::vector<PointId> landmarks,
                                         const WeightAssignment& w, int m);

struct AmbientStabilityFinding {
  PointId landmark = -1;
  double perturbed_w2 = 0.0;
  Simplex simplex;
};

struct AmbientStabilityReport {
  std::size_t triangulations = 0;
  std::vector<AmbientStabilityFinding> findings;
};

/// Stability audit against true weighted Delaunay triangulations of the
/// landmarks (needs coordinates, d <= 3, |L| <= 64): for the first `sample`
/// landmarks and `grid` perturbed weights in [w^2, w^2 + delta0^2 lambda^2],
/// reports candidate slivers that appear in Del.
AmbientStabilityReport stability_audit_ambient(const PointCloud& W, const DistanceMatrix& dm, const Net& net,
                                               const WeightAssignment& w, const WeightParams& params,
                                               std::size_t sample, std::size_t grid);

}  // namespace distwit
