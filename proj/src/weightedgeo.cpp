#include "distwit/weightedgeo.hpp"

#include <algorithm>
#include <cmath>

namespace distwit {

namespace {

std::vector<std::span<const double>> rows_of(const EmbeddedSimplex& emb) {
  std::vector<std::span<const double>> rows;
  for (std::size_t i = 0; i <= emb.k; ++i) rows.push_back(emb.vertex(i));
  return rows;
}

double sq_norm_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += (a[c] - b[c]) * (a[c] - b[c]);
  return s;
}

// Edge vectors a_i = v_i - v_0 and their Gram matrix.
struct EdgeSystem {
  std::vector<std::vector<double>> edges;
  SquareMatrix gram;
  double singular_det = 0.0;
};

EdgeSystem edge_system(std::span<const std::span<const double>> verts) {
  EdgeSystem es;
  const std::size_t r = verts.size() - 1;
  const std::size_t dim = verts[0].size();
  double delta2 = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) delta2 = std::max(delta2, sq_norm_diff(verts[i], verts[j]));
  es.edges.assign(r, std::vector<double>(dim));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < dim; ++c) es.edges[i][c] = verts[i + 1][c] - verts[0][c];
  es.gram = SquareMatrix(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      double s = 0.0;
      for (std::size_t c = 0; c < dim; ++c) s += es.edges[i][c] * es.edges[j][c];
      es.gram(i, j) = s;
      es.gram(j, i) = s;
    }
  es.singular_det = kDegenerateRelDet * std::pow(delta2, static_cast<double>(r));
  return es;
}

std::vector<double> combine(std::span<const double> origin, const EdgeSystem& es, std::span<const double> coef) {
  std::vector<double> out(origin.begin(), origin.end());
  for (std::size_t i = 0; i < coef.size(); ++i)
    for (std::size_t c = 0; c < out.size(); ++c) out[c] += coef[i] * es.edges[i][c];
  return out;
}

}  // namespace

std::vector<double> WeightAssignment::on(const Simplex& s) const {
  std::vector<double> out;
  out.reserve(s.size());
  for (PointId v : s) out.push_back(w2(v));
  return out;
}

double WeightAssignment::relative_amplitude(const Net& net) const {
  double amp = 0.0;
  for (std::size_t i = 0; i < net.size() && i < net.nearest_dist.size(); ++i)
    if (net.nearest_dist[i] > 0.0) amp = std::max(amp, std::sqrt(w2(net.landmark_ids[i])) / net.nearest_dist[i]);
  return amp;
}

OrthoCenter affine_weighted_center(std::span<const std::span<const double>> verts, std::span<const double> w2) {
  const std::size_t r = verts.size() - 1;
  if (r == 0) return {std::vector<double>(verts[0].begin(), verts[0].end()), -w2[0]};
  EdgeSystem es = edge_system(verts);
  std::vector<double> rhs(r), coef(r);
  for (std::size_t i = 0; i < r; ++i) rhs[i] = 0.5 * (es.gram(i, i) - w2[i + 1] + w2[0]);
  if (!solve(es.gram, rhs, coef, es.singular_det))
    throw DegenerateError("weightedgeo", "weighted center of a degenerate simplex");
  OrthoCenter oc;
  oc.center = combine(verts[0], es, coef);
  oc.radius2 = sq_norm_diff(oc.center, verts[0]) - w2[0];
  return oc;
}

std::vector<double> project_to_affine_hull(std::span<const std::span<const double>> verts, std::span<const double> x) {
  const std::size_t r = verts.size() - 1;
  if (r == 0) return {verts[0].begin(), verts[0].end()};
  EdgeSystem es = edge_system(verts);
  std::vector<double> rhs(r, 0.0), coef(r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t c = 0; c < x.size(); ++c) rhs[i] += es.edges[i][c] * (x[c] - verts[0][c]);
  if (!solve(es.gram, rhs, coef, es.singular_det))
    throw DegenerateError("weightedgeo", "projection onto a degenerate affine hull");
  return combine(verts[0], es, coef);
}

OrthoCenter weighted_center(const EmbeddedSimplex& emb, std::span<const double> w2) {
  auto rows = rows_of(emb);
  return affine_weighted_center(rows, w2);
}

double dist_to_normal_space(const EmbeddedSimplex& emb, std::size_t p_pos, std::span<const double> w2_facet) {
  auto rows = rows_of(emb);
  std::vector<std::span<const double>> facet;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (i != p_pos) facet.push_back(rows[i]);
  const OrthoCenter c = affine_weighted_center(facet, w2_facet);
  const auto proj = project_to_affine_hull(facet, rows[p_pos]);
  return std::sqrt(sq_norm_diff(proj, c.center));
}

double forbidden_F(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w) {
  const auto pos = static_cast<std::size_t>(std::find(s.begin(), s.end(), p) - s.begin());
  const Simplex facet = opposite_face(s, p);
  const auto facet_w2 = w.on(facet);

  const Altitude d = altitude(dm, s, p);
  if (d.degenerate) throw DegenerateError("weightedgeo", "degenerate facet opposite " + std::to_string(p));
  const EmbeddedSimplex emb = embed(dm, s);
  const double dn = dist_to_normal_space(emb, pos, facet_w2);

  auto rows = rows_of(emb);
  std::vector<std::span<const double>> facet_rows;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (i != pos) facet_rows.push_back(rows[i]);
  const double r2 = affine_weighted_center(facet_rows, facet_w2).radius2;
  return d.value * d.value + dn * dn - r2;
}

double eta(double gamma0, double delta0, int m, double lambda, EtaMode mode, double eta_star) {
  if (mode == EtaMode::practical) return eta_star * lambda * lambda;
  return std::ldexp(gamma0 + delta0 * delta0 / std::pow(gamma0, m), 14) * lambda * lambda;
}

ForbiddenInterval forbidden_interval(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w,
                                     double eta_value) {
  const double f = forbidden_F(dm, s, p, w);
  return {f - 0.5 * eta_value, f + 0.5 * eta_value, s, p};
}

double excentricity(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w) {
  const auto pos = static_cast<std::size_t>(std::find(s.begin(), s.end(), p) - s.begin());
  const EmbeddedSimplex emb = embed(dm, s);
  auto rows = rows_of(emb);
  const OrthoCenter c = affine_weighted_center(rows, w.on(s));
  std::vector<std::span<const double>> facet;
  for (std::size_t i = 0; i < rows.size(); ++i)
    if (i != pos) facet.push_back(rows[i]);
  const auto c_proj = project_to_affine_hull(facet, c.center);
  const auto p_proj = project_to_affine_hull(facet, rows[pos]);
  double h2 = 0.0, side = 0.0;
  for (std::size_t k = 0; k < emb.k; ++k) {
    h2 += (c.center[k] - c_proj[k]) * (c.center[k] - c_proj[k]);
    side += (c.center[k] - c_proj[k]) * (rows[pos][k] - p_proj[k]);
  }
  return side < 0.0 ? -std::sqrt(h2) : std::sqrt(h2);
}

double pumping_check(const DistanceMatrix& dm, const Simplex& s, PointId p, const WeightAssignment& w) {
  const Altitude d = altitude(dm, s, p);
  if (d.degenerate || is_degenerate(dm, s)) throw DegenerateError("weightedgeo", "pumping check on a degenerate simplex");
  const double h = excentricity(dm, s, p, w);
  return std::abs(2.0 * d.value * h - (forbidden_F(dm, s, p, w) - w.w2(p)));
}

}  // namespace distwit
