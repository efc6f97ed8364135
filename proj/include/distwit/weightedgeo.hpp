#pragma once

#include <span>
#include <vector>

#include "distwit/dmatrix.hpp"
#include "distwit/netsel.hpp"
#include "distwit/simplexgeo.hpp"

namespace distwit {

/// Squared weights omega(p)^2 indexed by point id; non-landmarks carry 0.
class WeightAssignment {
 public:
  WeightAssignment() = default;
  explicit WeightAssignment(std::size_t n_points) : w2_(n_points, 0.0) {}

  double w2(PointId p) const { return w2_[static_cast<std::size_t>(p)]; }
  void set_w2(PointId p, double v) { w2_[static_cast<std::size_t>(p)] = v; }
  std::size_t size() const { return w2_.size(); }
  const std::vector<double>& values() const { return w2_; }

  /// Squared weights of the vertices of s, in vertex order.
  std::vector<double> on(const Simplex& s) const;

  /// max over landmarks of omega(p) / L(p).
  double relative_amplitude(const Net& net) const;

 private:
  std::vector<double> w2_;
};

struct OrthoCenter {
  std::vector<double> center;  // point of the affine hull
  double radius2 = 0.0;        // may be negative
};

/// Weighted center of an arbitrary vertex list in any ambient dimension:
/// the point of the affine hull with equal weighted distance to every vertex.
/// Throws DegenerateError when the vertices are affinely dependent.
OrthoCenter affine_weighted_center(std::span<const std::span<const double>> verts, std::span<const double> w2);

/// Orthogonal projection of x onto the affine hull of verts.
std::vector<double> project_to_affine_hull(std::span<const std::span<const double>> verts, std::span<const double> x);

/// C_omega and R_omega^2 of the embedded simplex (per-vertex squared weights).
OrthoCenter weighted_center(const EmbeddedSimplex& emb, std::span<const double> w2);

/// Distance from vertex `p_pos` of the embedded simplex to the weighted
/// normal space of the opposite facet, whose weights are `w2_facet`.
double dist_to_normal_space(const EmbeddedSimplex& emb, std::size_t p_pos, std::span<const double> w2_facet);

/// F_omega(p, s) = D(p,s)^2 + d(p, N_omega(s_p))^2 - R_omega(s_p)^2.
/// Only the weights of s_p are read.
double forbidden_F(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w);

enum class EtaMode { theoretical, practical };

/// 2^14 (Gamma0 + delta0^2 / Gamma0^m) lambda^2, or eta_star * lambda^2.
double eta(double gamma0, double delta0, int m, double lambda, EtaMode mode, double eta_star = 0.01);

struct ForbiddenInterval {
  double lo = 0.0;
  double hi = 0.0;
  Simplex simplex;
  PointId focus = -1;

  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

ForbiddenInterval forbidden_interval(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w,
                                     double eta);

/// H_omega(p, s): signed distance of C_omega(s) from aff(s_p), positive on p's side.
double excentricity(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w);

/// |2 D(p,s) H_omega(p,s) - (F_omega(p,s) - omega(p)^2)|.
double pumping_check(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w);

}  // namespace distwit
