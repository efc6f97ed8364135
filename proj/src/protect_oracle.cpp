#include "distwit/protect_oracle.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "distwit/simplexgeo.hpp"
#include "distwit/witness.hpp"

namespace distwit {

namespace {

std::size_t at(PointId p) { return static_cast<std::size_t>(p); }

void check_size(const PointCloud& pts) {
  if (pts.dim() < 1 || pts.dim() > 3) throw InputError("protect_oracle", "ambient dimension must be 1..3");
  if (pts.size() > kOracleMaxPoints) throw InputError("protect_oracle", "more than 64 points");
}

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s;
}

double cloud_diameter2(const PointCloud& pts) {
  double m = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) m = std::max(m, sq_dist(pts.point(i), pts.point(j)));
  return m;
}

double tie_tol(const PointCloud& pts) { return 1e-9 * std::max(cloud_diameter2(pts), 1e-300); }

std::vector<PointId> others_of(std::size_t n, const Simplex& s) {
  std::vector<PointId> q;
  for (PointId i = 0; i < static_cast<PointId>(n); ++i)
    if (!std::binary_search(s.begin(), s.end(), i)) q.push_back(i);
  return q;
}

// d(c, q^w) - d(c, p0^w)
double gap(const PointCloud& pts, std::span<const double> w2, PointId q, PointId p0, std::span<const double> c) {
  return sq_dist(c, pts.point(at(q))) - w2[at(q)] - sq_dist(c, pts.point(at(p0))) + w2[at(p0)];
}

std::size_t affine_rank(const PointCloud& pts) {
  if (pts.size() < 2) return 0;
  Eigen::MatrixXd e(static_cast<Eigen::Index>(pts.dim()), static_cast<Eigen::Index>(pts.size() - 1));
  for (std::size_t j = 1; j < pts.size(); ++j)
    for (std::size_t k = 0; k < pts.dim(); ++k)
      e(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j - 1)) = pts(j, k) - pts(0, k);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(e);
  lu.setThreshold(1e-9);
  return static_cast<std::size_t>(lu.rank());
}

std::optional<OrthoCenter> center_of(const PointCloud& pts, std::span<const double> w2, const Simplex& s) {
  std::vector<std::span<const double>> verts;
  std::vector<double> ws;
  for (PointId v : s) {
    verts.push_back(pts.point(at(v)));
    ws.push_back(w2[at(v)]);
  }
  try {
    return affine_weighted_center(verts, ws);
  } catch (const DegenerateError&) {
    return std::nullopt;
  }
}

// maximize min_q (a_q + b_q . u) over the box |u_i| <= box by enumerating
// vertices of the arrangement: each candidate is fixed by r+1 tight
// constraints (q-constraints with t, or box faces).
struct BoxOptimum {
  double value = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd u;
};

BoxOptimum box_lp(const std::vector<double>& a, const std::vector<Eigen::VectorXd>& b, std::size_t r, double box) {
  const std::size_t nq = a.size();
  const std::size_t ncons = nq + 2 * r;
  BoxOptimum best;
  auto value_at = [&](const Eigen::VectorXd& u) {
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < nq; ++q) v = std::min(v, a[q] + b[q].dot(u));
    return v;
  };
  Simplex all(ncons);
  for (std::size_t i = 0; i < ncons; ++i) all[i] = static_cast<PointId>(i);
  const auto n = static_cast<Eigen::Index>(r + 1);
  Eigen::MatrixXd sys(n, n);
  Eigen::VectorXd rhs(n);
  for_each_face(all, r + 1, [&](const Simplex& tight) {
    if (static_cast<std::size_t>(tight[0]) >= nq) return;  // needs a q-constraint to pin t
    sys.setZero();
    for (Eigen::Index row = 0; row < n; ++row) {
      const auto c = static_cast<std::size_t>(tight[static_cast<std::size_t>(row)]);
      if (c < nq) {
        sys.row(row).head(static_cast<Eigen::Index>(r)) = b[c].transpose();
        sys(row, n - 1) = -1.0;
        rhs(row) = -a[c];
      } else {
        const std::size_t j = c - nq;
        sys(row, static_cast<Eigen::Index>(j / 2)) = 1.0;
        rhs(row) = (j % 2 == 0) ? box : -box;
      }
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sys);
    if (!lu.isInvertible()) return;
    const Eigen::VectorXd sol = lu.solve(rhs);
    const Eigen::VectorXd u = sol.head(static_cast<Eigen::Index>(r));
    if (u.cwiseAbs().maxCoeff() > box * (1.0 + 1e-9)) return;
    const double v = value_at(u);
    if (v > best.value) {
      best.value = v;
      best.u = u;
    }
  });
  return best;
}

}  // namespace

double protection_margin_at(const PointCloud& pts, std::span<const double> w2, const Simplex& s,
                            std::span<const double> c) {
  double m = std::numeric_limits<double>::infinity();
  for (PointId q : others_of(pts.size(), s)) m = std::min(m, gap(pts, w2, q, s[0], c));
  return m;
}

FaceOptimum max_protection_margin(const PointCloud& pts, std::span<const double> w2, const Simplex& s) {
  const std::size_t d = pts.dim();
  const std::size_t k = s.size() - 1;
  if (k > d) throw InputError("protect_oracle", "simplex dimension exceeds ambient dimension");
  const auto center = center_of(pts, w2, s);
  if (!center) throw DegenerateError("protect_oracle", "affinely dependent simplex " + to_string(s));
  const std::size_t r = d - k;

  FaceOptimum out;
  const auto others = others_of(pts.size(), s);
  if (others.empty()) {
    out.margin = std::numeric_limits<double>::infinity();
    out.bounded = false;
    out.c = center->center;
    return out;
  }
  if (r == 0) {
    out.c = center->center;
    out.margin = protection_margin_at(pts, w2, s, out.c);
    return out;
  }

  // orthonormal basis of the complement of the simplex directions
  Eigen::MatrixXd basis;
  const auto dd = static_cast<Eigen::Index>(d);
  if (k == 0) {
    basis = Eigen::MatrixXd::Identity(dd, dd);
  } else {
    Eigen::MatrixXd edges(dd, static_cast<Eigen::Index>(k));
    for (std::size_t i = 1; i <= k; ++i)
      for (std::size_t c = 0; c < d; ++c)
        edges(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(i - 1)) =
            pts(at(s[i]), c) - pts(at(s[0]), c);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(edges);
    const Eigen::MatrixXd q = qr.householderQ();
    basis = q.rightCols(static_cast<Eigen::Index>(r));
  }
  Eigen::VectorXd c0 = Eigen::Map<const Eigen::VectorXd>(center->center.data(), dd);
  Eigen::VectorXd p0 = Eigen::Map<const Eigen::VectorXd>(pts.point(at(s[0])).data(), dd);

  std::vector<double> a;
  std::vector<Eigen::VectorXd> b;
  for (PointId q : others) {
    Eigen::VectorXd qv = Eigen::Map<const Eigen::VectorXd>(pts.point(at(q)).data(), dd);
    a.push_back(gap(pts, w2, q, s[0], center->center));
    b.push_back(-2.0 * basis.transpose() * (qv - p0));
  }
  const double scale2 = std::max(cloud_diameter2(pts), 1e-300);
  const double box = 1e4 * std::sqrt(scale2);
  const BoxOptimum near = box_lp(a, b, r, box);
  const BoxOptimum far = box_lp(a, b, r, 10.0 * box);
  if (far.value > near.value + 1e-6 * (std::abs(near.value) + scale2)) {
    out.bounded = false;
    out.margin = std::numeric_limits<double>::infinity();
    const Eigen::VectorXd c = c0 + basis * far.u;
    out.c.assign(c.data(), c.data() + c.size());
    return out;
  }
  const Eigen::VectorXd c = c0 + basis * near.u;
  out.c.assign(c.data(), c.data() + c.size());
  out.margin = near.value;
  return out;
}

bool in_weighted_delaunay(const PointCloud& pts, std::span<const double> w2, const Simplex& s) {
  if (!center_of(pts, w2, s)) return false;
  const FaceOptimum opt = max_protection_margin(pts, w2, s);
  const double tol = tie_tol(pts);
  if (std::abs(opt.margin) <= tol) throw OracleDegeneracy(s, "weighted distance tie at the Voronoi face of");
  return opt.margin > tol;
}

SimplicialComplex brute_delaunay_lp(const PointCloud& pts, std::span<const double> w2) {
  check_size(pts);
  SimplicialComplex k;
  Simplex all(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) all[i] = static_cast<PointId>(i);
  for (std::size_t size = 1; size <= std::min(pts.size(), pts.dim() + 1); ++size)
    for_each_face(all, size, [&](const Simplex& s) {
      if (in_weighted_delaunay(pts, w2, s)) k.insert(s);
    });
  k.normalize();
  return k;
}

SimplicialComplex brute_delaunay(const PointCloud& pts, std::span<const double> w2) {
  check_size(pts);
  const std::size_t d = pts.dim();
  if (pts.size() < d + 1 || affine_rank(pts) < d) return brute_delaunay_lp(pts, w2);

  const double tol = tie_tol(pts);
  Simplex all(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) all[i] = static_cast<PointId>(i);
  std::vector<Simplex> top;
  for_each_face(all, d + 1, [&](const Simplex& s) {
    const auto center = center_of(pts, w2, s);
    if (!center) return;
    double margin = std::numeric_limits<double>::infinity();
    PointId closest = -1;
    for (PointId q : others_of(pts.size(), s)) {
      const double g = gap(pts, w2, q, s[0], center->center);
      if (g < margin) {
        margin = g;
        closest = q;
      }
    }
    if (std::abs(margin) <= tol) {
      Simplex tuple = s;
      tuple.push_back(closest);
      std::sort(tuple.begin(), tuple.end());
      throw OracleDegeneracy(tuple, "weighted cospherical tuple");
    }
    if (margin > tol) top.push_back(s);
  });
  return SimplicialComplex::closure_of(std::move(top));
}

ProtectionRecord measure_protection(const PointCloud& pts, std::span<const double> w2, const SimplicialComplex& k,
                                    const Simplex& s, double delta2) {
  if (!k.contains(s)) throw InputError("protect_oracle", "simplex " + to_string(s) + " is not in the complex");
  const FaceOptimum opt = max_protection_margin(pts, w2, s);
  if (opt.margin < -tie_tol(pts)) throw Error("protect_oracle", "empty Voronoi face for " + to_string(s));
  return {s, opt.c, opt.margin, opt.margin > delta2};
}

bool cell_bounded(const PointCloud& pts, PointId p, std::size_t directions) {
  const std::size_t d = pts.dim();
  std::vector<std::vector<double>> dirs;
  if (d == 1) {
    dirs = {{1.0}, {-1.0}};
  } else if (d == 2 && directions == 0) {
    // exact: the cell escapes iff the other points leave an angular gap >= pi
    std::vector<double> angles;
    for (std::size_t q = 0; q < pts.size(); ++q)
      if (q != at(p)) angles.push_back(std::atan2(pts(q, 1) - pts(at(p), 1), pts(q, 0) - pts(at(p), 0)));
    if (angles.size() < 3) return false;
    std::sort(angles.begin(), angles.end());
    double gap = angles.front() + 2.0 * std::numbers::pi - angles.back();
    for (std::size_t i = 1; i < angles.size(); ++i) gap = std::max(gap, angles[i] - angles[i - 1]);
    return gap < std::numbers::pi - 1e-12;
  } else if (d == 2) {
    for (std::size_t i = 0; i < directions; ++i) {
      const double a = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(directions);
      dirs.push_back({std::cos(a), std::sin(a)});
    }
  } else {
    const std::size_t n = directions ? directions : 4000;
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < n; ++i) {
      const double z = 1.0 - 2.0 * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      const double rho = std::sqrt(1.0 - z * z);
      const double a = golden * static_cast<double>(i);
      dirs.push_back({rho * std::cos(a), rho * std::sin(a), z});
    }
  }
  for (const auto& u : dirs) {
    bool escapes = true;
    for (std::size_t q = 0; q < pts.size() && escapes; ++q) {
      if (q == at(p)) continue;
      double dot = 0.0;
      for (std::size_t k = 0; k < d; ++k) dot += u[k] * (pts(q, k) - pts(at(p), k));
      escapes = dot < 0.0;
    }
    if (escapes) return false;
  }
  return true;
}

std::size_t DecayReport::violations() const {
  std::size_t v = 0;
  for (const auto& rec : vertices) v += rec.violations.size();
  return v;
}

DecayReport verify_decay_lemma(const PointCloud& pts, std::span<const double> w2, std::optional<double> delta2,
                               std::span<const PointId> which) {
  const SimplicialComplex k = brute_delaunay(pts, w2);
  const int d = static_cast<int>(pts.dim());
  std::vector<PointId> targets(which.begin(), which.end());
  if (targets.empty()) targets = k.vertices();

  DecayReport rep;
  for (PointId p : targets) {
    VertexDecay rec;
    rec.vertex = p;
    rec.bounded = k.contains({p}) && cell_bounded(pts, p);
    if (!rec.bounded) {
      rep.vertices.push_back(std::move(rec));
      continue;
    }
    auto incident = [&](const Simplex& s) { return std::binary_search(s.begin(), s.end(), p); };
    double min_top = std::numeric_limits<double>::infinity();
    bool any_top = false;
    for (const Simplex& s : k.simplices(d))
      if (incident(s)) {
        any_top = true;
        min_top = std::min(min_top, measure_protection(pts, w2, k, s).protection);
      }
    rec.delta2 = delta2.value_or(min_top);
    rec.hypothesis = any_top && rec.delta2 > 0.0 && min_top >= rec.delta2;
    if (!rec.hypothesis) {
      rep.vertices.push_back(std::move(rec));
      continue;
    }
    ++rep.asserted;
    for (int j = 0; j < d; ++j)
      for (const Simplex& s : k.simplices(j)) {
        if (!incident(s)) continue;
        const double prot = measure_protection(pts, w2, k, s).protection;
        const double required = rec.delta2 / static_cast<double>(d - j + 1);
        ++rec.faces_checked;
        rec.worst_ratio = std::min(rec.worst_ratio, prot / required);
        if (prot < required - 1e-9) rec.violations.push_back({s, prot, required});
      }
    rep.vertices.push_back(std::move(rec));
  }
  return rep;
}

InclusionReport verify_witness_inclusion(const PointCloud& W, std::vector<PointId> landmarks,
                                         const WeightAssignment& w, int m) {
  const DistanceMatrix dm = from_point_cloud(W);
  const Net net = make_net(dm, landmarks);
  InclusionReport rep;
  rep.witness = build_witness_complex(dm, net, w, m);

  const PointCloud pts = W.subset(net.landmark_ids);
  std::vector<double> local_w2;
  for (PointId p : net.landmark_ids) local_w2.push_back(w.w2(p));
  const SimplicialComplex del = brute_delaunay(pts, local_w2);
  for (int d = 0; d <= del.max_dim(); ++d)
    for (const Simplex& s : del.simplices(d)) {
      Simplex mapped;
      for (PointId v : s) mapped.push_back(net.landmark_ids[at(v)]);
      std::sort(mapped.begin(), mapped.end());
      rep.delaunay.insert(std::move(mapped));
    }
  rep.delaunay.normalize();
  for (int d = 0; d <= rep.witness.max_dim(); ++d)
    for (const Simplex& s : rep.witness.simplices(d))
      if (!rep.delaunay.contains(s)) rep.violations.push_back(s);
  return rep;
}

AmbientStabilityReport stability_audit_ambient(const PointCloud& W, const DistanceMatrix& dm, const Net& net,
                                               const WeightAssignment& w, const WeightParams& params,
                                               std::size_t sample, std::size_t grid) {
  AmbientStabilityReport rep;
  if (grid == 0 || net.size() < 2) return rep;
  const PointCloud pts = W.subset(net.landmark_ids);
  check_size(pts);
  const auto ord = net.ordinal_map(dm.size());
  const double span = params.delta0 * params.delta0 * net.lambda * net.lambda;
  for (std::size_t i = 0; i < std::min(sample, net.size()); ++i) {
    const PointId p = net.landmark_ids[i];
    const auto cands = candidate_simplices(dm, net, p, params.gamma0, params.m, params.cap);
    if (cands.simplices.empty()) continue;
    for (std::size_t g = 0; g < grid; ++g) {
      const double t = grid == 1 ? 0.0 : static_cast<double>(g) / static_cast<double>(grid - 1);
      std::vector<double> local;
      for (PointId q : net.landmark_ids) local.push_back(w.w2(q));
      local[i] = w.w2(p) + t * span;
      const SimplicialComplex del = brute_delaunay(pts, local);
      ++rep.triangulations;
      for (const Simplex& s : cands.simplices) {
        Simplex mapped;
        for (PointId v : s) mapped.push_back(ord[at(v)]);
        std::sort(mapped.begin(), mapped.end());
        if (del.contains(mapped)) rep.findings.push_back({p, local[i], s});
      }
    }
  }
  return rep;
}

}  // namespace distwit
