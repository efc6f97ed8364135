#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "distwit/types.hpp"

namespace distwit {

/// Ambient-coordinate samples, row-major n x dim.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(std::size_t n, std::size_t dim);
  PointCloud(std::size_t dim, std::vector<double> coords);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> point(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  double operator()(std::size_t i, std::size_t k) const { return coords_[i * dim_ + k]; }
  double& operator()(std::size_t i, std::size_t k) { return coords_[i * dim_ + k]; }

  const std::vector<double>& coords() const { return coords_; }

  /// Rows restricted to `ids`, in that order.
  PointCloud subset(std::span<const PointId> ids) const;

 private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Symmetric matrix of squared pairwise distances. Only the upper triangle
/// (diagonal included) is stored, so asymmetry cannot survive ingestion.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  explicit DistanceMatrix(std::size_t n);

  std::size_t size() const { return n_; }

  double d2(std::size_t i, std::size_t j) const { return d2_[index(i, j)]; }
  double dist(std::size_t i, std::size_t j) const;
  void set_d2(std::size_t i, std::size_t j, double v) { d2_[index(i, j)] = v; }

  /// Largest stored squared distance.
  double max_d2() const;

  /// Flat upper-triangle storage, row-major, length n(n+1)/2.
  const std::vector<double>& data() const { return d2_; }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    if (i > j) std::swap(i, j);
    return i * n_ - i * (i + 1) / 2 + j;
  }

  std::size_t n_ = 0;
  std::vector<double> d2_;
};

enum class MatrixFormat { csv, binary };

/// Parses and validates an n x n table of unsquared distances (csv) or the
/// "DWIT" binary layout of squared distances.
DistanceMatrix load_distance_matrix(const std::filesystem::path& path, MatrixFormat format);

/// Validates a dense row-major n x n table of unsquared distances.
DistanceMatrix distance_matrix_from_table(const std::vector<std::vector<double>>& rows);

void save_distance_matrix_binary(const DistanceMatrix& dm, const std::filesystem::path& path);
void save_distance_matrix_csv(const DistanceMatrix& dm, const std::filesystem::path& path);

/// Squared distances summed over coordinates in ascending order.
DistanceMatrix from_point_cloud(const PointCloud& cloud);

PointCloud load_point_cloud(const std::filesystem::path& path);
void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path);

struct TriangleViolation {
  PointId i, j, k;  // d(i,j) > d(i,k) + d(k,j) + tol
  double excess;
};

struct TriangleReport {
  std::size_t triples_checked = 0;
  std::vector<TriangleViolation> violations;
  bool pass() const { return violations.empty(); }
};

/// Checks `sample_count` seeded random triples (all orderings of each).
TriangleReport validate_triangle(const DistanceMatrix& dm, std::size_t sample_count, double tol,
                                 std::uint64_t seed = 0);

/// Checks every triple. Refuses n > 500.
TriangleReport validate_triangle_exhaustive(const DistanceMatrix& dm, double tol);

}  // namespace distwit
