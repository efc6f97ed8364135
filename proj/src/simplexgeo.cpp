#include "distwit/simplexgeo.hpp"

#include <algorithm>
#include <cmath>

namespace distwit {

namespace {

std::size_t idx(PointId p) { return static_cast<std::size_t>(p); }

double factorial(std::size_t k) {
  double f = 1.0;
  for (std::size_t i = 2; i <= k; ++i) f *= static_cast<double>(i);
  return f;
}

// |det Gram| and the threshold under which it counts as zero.
struct GramDet {
  double abs_det;
  double threshold;
};

GramDet gram_det(const DistanceMatrix& dm, const Simplex& s) {
  const std::size_t k = s.size() - 1;
  const double delta2 = diameter(dm, s) * diameter(dm, s);
  return {std::abs(determinant(gram_matrix(dm, s))), kDegenerateRelDet * std::pow(delta2, static_cast<double>(k))};
}

}  // namespace

SquareMatrix gram_matrix(const DistanceMatrix& dm, const Simplex& s) {
  const std::size_t k = s.empty() ? 0 : s.size() - 1;
  SquareMatrix g(k);
  const std::size_t p0 = idx(s[0]);
  for (std::size_t i = 1; i <= k; ++i)
    for (std::size_t j = i; j <= k; ++j) {
      const double b = 0.5 * (dm.d2(idx(s[i]), p0) + dm.d2(idx(s[j]), p0) - dm.d2(idx(s[i]), idx(s[j])));
      g(i - 1, j - 1) = b;
      g(j - 1, i - 1) = b;
    }
  return g;
}

double diameter(const DistanceMatrix& dm, const Simplex& s) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) m = std::max(m, dm.d2(idx(s[i]), idx(s[j])));
  return std::sqrt(m);
}

double shortest_edge(const DistanceMatrix& dm, const Simplex& s) {
  if (s.size() < 2) return 0.0;
  double m = dm.d2(idx(s[0]), idx(s[1]));
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) m = std::min(m, dm.d2(idx(s[i]), idx(s[j])));
  return std::sqrt(m);
}

double simplex_volume(const DistanceMatrix& dm, const Simplex& s) {
  if (s.size() <= 1) return 1.0;
  auto [det, threshold] = gram_det(dm, s);
  if (det < threshold || det == 0.0) return 0.0;
  return std::sqrt(det) / factorial(s.size() - 1);
}

bool is_degenerate(const DistanceMatrix& dm, const Simplex& s) {
  return s.size() > 1 && simplex_volume(dm, s) == 0.0;
}

Simplex opposite_face(const Simplex& s, PointId p) {
  Simplex f;
  f.reserve(s.size() - 1);
  for (PointId v : s)
    if (v != p) f.push_back(v);
  return f;
}

Altitude altitude(const DistanceMatrix& dm, const Simplex& s, PointId p) {
  const double facet = simplex_volume(dm, opposite_face(s, p));
  if (facet == 0.0) return {0.0, true};
  const auto j = static_cast<double>(s.size() - 1);
  return {j * simplex_volume(dm, s) / facet, false};
}

double thickness(const DistanceMatrix& dm, const Simplex& s) {
  if (s.size() <= 1) return 1.0;
  const double vol = simplex_volume(dm, s);
  if (vol == 0.0) return 0.0;
  const auto j = static_cast<double>(s.size() - 1);
  const double delta = diameter(dm, s);
  double t = 1.0;
  for (PointId p : s) {
    Altitude a = altitude(dm, s, p);
    if (a.degenerate) return 0.0;
    t = std::min(t, a.value / (j * delta));
  }
  return t;
}

SimplexMetrics simplex_metrics(const DistanceMatrix& dm, const Simplex& s) {
  SimplexMetrics m;
  m.volume = simplex_volume(dm, s);
  m.diameter = diameter(dm, s);
  m.shortest_edge = shortest_edge(dm, s);
  m.degenerate = s.size() > 1 && m.volume == 0.0;
  if (s.size() > 1)
    for (PointId p : s) {
      Altitude a = altitude(dm, s, p);
      m.altitudes.push_back(a.value);
      m.degenerate = m.degenerate || a.degenerate;
    }
  m.thickness = thickness(dm, s);
  return m;
}

const char* to_string(Shape s) {
  switch (s) {
    case Shape::good: return "good";
    case Shape::bad: return "bad";
    case Shape::sliver: return "sliver";
  }
  return "?";
}

Shape classify(const DistanceMatrix& dm, const Simplex& s, double gamma0) {
  ShapeClassifier c(dm, gamma0);
  return c.classify(s);
}

std::size_t ShapeClassifier::Hash::operator()(const Simplex& s) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (PointId v : s) {
    h ^= static_cast<std::size_t>(v) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

bool ShapeClassifier::thick_enough(const Simplex& s) {
  if (s.size() <= 2) return true;
  if (auto it = thick_.find(s); it != thick_.end()) return it->second;
  const bool ok = thickness(*dm_, s) >= std::pow(gamma0_, static_cast<double>(s.size() - 1));
  thick_.emplace(s, ok);
  return ok;
}

bool ShapeClassifier::proper_faces_good(const Simplex& s) {
  if (s.size() <= 3) return true;  // proper faces are edges and vertices
  if (auto it = memo_.find(s); it != memo_.end()) return it->second;
  bool ok = true;
  // faces of codimension one are good iff thick enough and their own proper faces are good
  for (PointId p : s) {
    Simplex f = opposite_face(s, p);
    if (!thick_enough(f) || !proper_faces_good(f)) {
      ok = false;
      break;
    }
  }
  memo_.emplace(s, ok);
  return ok;
}

Shape ShapeClassifier::classify(const Simplex& s) {
  const bool faces = proper_faces_good(s);
  const bool self = thick_enough(s);
  if (faces && self) return Shape::good;
  if (faces) return Shape::sliver;
  return Shape::bad;
}

double EmbeddedSimplex::sq_dist(std::size_t i, std::size_t j) const {
  double s = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const double t = coords[i * k + c] - coords[j * k + c];
    s += t * t;
  }
  return s;
}

EmbeddedSimplex embed(const DistanceMatrix& dm, const Simplex& s) {
  EmbeddedSimplex e;
  e.k = s.size() - 1;
  const std::size_t k = e.k;
  e.coords.assign((k + 1) * k, 0.0);
  if (k == 0) return e;

  const double delta2 = diameter(dm, s) * diameter(dm, s);
  const double psd_tol = 1e-8 * delta2;
  const double rank_tol = 1e-14 * delta2;
  SquareMatrix schur = gram_matrix(dm, s);
  std::vector<bool> done(k, false);
  auto x = [&](std::size_t vertex, std::size_t col) -> double& { return e.coords[(vertex + 1) * k + col]; };

  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = k;
    for (std::size_t i = 0; i < k; ++i) {
      if (done[i]) continue;
      if (schur(i, i) < -psd_tol) throw NonEuclideanError(s, "Gram matrix not positive semidefinite for");
      if (piv == k || schur(i, i) > schur(piv, piv)) piv = i;
    }
    if (schur(piv, piv) <= rank_tol) {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
          if (!done[a] && !done[b] && std::abs(schur(a, b)) > psd_tol)
            throw NonEuclideanError(s, "Gram matrix not positive semidefinite for");
      break;
    }
    const double root = std::sqrt(schur(piv, piv));
    done[piv] = true;
    x(piv, col) = root;
    for (std::size_t a = 0; a < k; ++a)
      if (!done[a]) x(a, col) = schur(a, piv) / root;
    for (std::size_t a = 0; a < k; ++a) {
      if (done[a]) continue;
      for (std::size_t b = 0; b < k; ++b)
        if (!done[b]) schur(a, b) -= x(a, col) * x(b, col);
    }
  }
  return e;
}

}  // namespace distwit
