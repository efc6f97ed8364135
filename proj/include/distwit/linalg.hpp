#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace distwit {

/// Small dense row-major square matrix. Simplex-sized problems only.
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

/// Determinant by Gaussian elimination with partial pivoting.
double determinant(SquareMatrix a);

/// Solves a x = b with partial pivoting. Returns false when |det a| falls
/// below `singular_det`; x is then unspecified.
bool solve(SquareMatrix a, std::span<const double> b, std::span<double> x, double singular_det);

/// |det Gram| below this fraction of (diameter^2)^k counts as degenerate.
inline constexpr double kDegenerateRelDet = 1e-12;

}  // namespace distwit
