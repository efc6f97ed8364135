#pragma once

#include <span>
#include <unordered_map>
#include <vector>

#include "distwit/dmatrix.hpp"
#include "distwit/linalg.hpp"
#include "distwit/types.hpp"

namespace distwit {

/// Simplex geometry computed from pairwise distances alone.

/// b_ij = <p_i - p_0, p_j - p_0> from squared lengths, i, j = 1..k.
SquareMatrix gram_matrix(const DistanceMatrix& dm, const Simplex& s);

/// Longest edge Delta(s); 0 for a vertex.
double diameter(const DistanceMatrix& dm, const Simplex& s);
/// Shortest edge L(s); 0 for a vertex.
double shortest_edge(const DistanceMatrix& dm, const Simplex& s);

/// k-dimensional content, (1/k!) sqrt|det Gram|, clamped to 0 below the
/// degeneracy threshold. A vertex has volume 1.
double simplex_volume(const DistanceMatrix& dm, const Simplex& s);

bool is_degenerate(const DistanceMatrix& dm, const Simplex& s);

struct Altitude {
  double value = 0.0;
  bool degenerate = false;  // the opposite facet has zero volume
};

/// D(p, s) = j vol(s) / vol(s_p).
Altitude altitude(const DistanceMatrix& dm, const Simplex& s, PointId p);

/// min_p D(p, s) / (j Delta(s)); 1 for dim <= 0, 0 for degenerate simplices.
double thickness(const DistanceMatrix& dm, const Simplex& s);

struct SimplexMetrics {
  double volume = 0.0;
  double diameter = 0.0;
  double shortest_edge = 0.0;
  std::vector<double> altitudes;  // aligned with the vertices
  double thickness = 1.0;
  bool degenerate = false;
};

SimplexMetrics simplex_metrics(const DistanceMatrix& dm, const Simplex& s);

enum class Shape { good, bad, sliver };

const char* to_string(Shape s);

/// Gamma0-good iff every j-face has thickness >= Gamma0^j; a sliver is bad
/// with all proper faces good.
Shape classify(const DistanceMatrix& dm, const Simplex& s, double gamma0);

/// Memoizing classifier: per-face "thick enough" verdicts are cached so a
/// dimension-ascending sweep reuses the work done on lower faces.
class ShapeClassifier {
 public:
  ShapeClassifier(const DistanceMatrix& dm, double gamma0) : dm_(&dm), gamma0_(gamma0) {}

  Shape classify(const Simplex& s);
  /// thickness(s) >= gamma0^dim(s)
  bool thick_enough(const Simplex& s);
  /// every face of s (s included) is thick enough
  bool good(const Simplex& s) { return classify(s) == Shape::good; }

  std::size_t cached() const { return memo_.size(); }

 private:
  struct Hash {
    std::size_t operator()(const Simplex& s) const noexcept;
  };
  bool proper_faces_good(const Simplex& s);

  const DistanceMatrix* dm_;
  double gamma0_;
  std::unordered_map<Simplex, bool, Hash> thick_;
  std::unordered_map<Simplex, bool, Hash> memo_;  // proper faces all good
};

/// Vertex coordinates in R^k realizing the distance submatrix; vertex 0 at
/// the origin. Rank-deficient simplices get zero trailing coordinates.
struct EmbeddedSimplex {
  std::size_t k = 0;
  std::vector<double> coords;  // (k+1) x k, row-major

  std::span<const double> vertex(std::size_t i) const { return {coords.data() + i * k, k}; }
  double sq_dist(std::size_t i, std::size_t j) const;
};

/// Pivoted Cholesky factorization of the Gram matrix. Throws
/// NonEuclideanError if the Gram matrix is indefinite beyond -1e-8 Delta^2.
EmbeddedSimplex embed(const DistanceMatrix& dm, const Simplex& s);

/// `s` with vertex p removed.
Simplex opposite_face(const Simplex& s, PointId p);

/// Calls f on every face of s with exactly `size` vertices, lexicographic.
template <typename F>
void for_each_face(const Simplex& s, std::size_t size, F&& f) {
  const std::size_t n = s.size();
  if (size > n) return;
  std::vector<std::size_t> idx(size);
  for (std::size_t i = 0; i < size; ++i) idx[i] = i;
  Simplex face(size);
  while (true) {
    for (std::size_t i = 0; i < size; ++i) face[i] = s[idx[i]];
    f(face);
    std::size_t i = size;
    while (i > 0 && idx[i - 1] == n - size + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace distwit
