#include "distwit/linalg.hpp"

#include <cmath>
#include <utility>

namespace distwit {

namespace {

// In-place LU with partial pivoting; applies the same row operations to rhs
// when given. Returns the determinant.
double eliminate(SquareMatrix& a, std::vector<double>* rhs) {
  const std::size_t n = a.size();
  double det = 1.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == 0.0) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a(piv, k), a(c, k));
      if (rhs) std::swap((*rhs)[piv], (*rhs)[c]);
      det = -det;
    }
    det *= a(c, c);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      if (f == 0.0) continue;
      for (std::size_t k = c; k < n; ++k) a(r, k) -= f * a(c, k);
      if (rhs) (*rhs)[r] -= f * (*rhs)[c];
    }
  }
  return det;
}

}  // namespace

double determinant(SquareMatrix a) { return eliminate(a, nullptr); }

bool solve(SquareMatrix a, std::span<const double> b, std::span<double> x, double singular_det) {
  const std::size_t n = a.size();
  std::vector<double> rhs(b.begin(), b.end());
  const double det = eliminate(a, &rhs);
  if (!(std::abs(det) >= singular_det) || det == 0.0) return false;
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a(i, k) * x[k];
    x[i] = s / a(i, i);
  }
  return true;
}

}  // namespace distwit
