#pragma once

#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "distwit/dmatrix.hpp"

namespace testing {

inline std::filesystem::path temp_dir(const std::string& tag) {
  static std::random_device rd;
  auto p = std::filesystem::temp_directory_path() / ("distwit_" + tag + "_" + std::to_string(rd()));
  std::filesystem::create_directories(p);
  return p;
}

inline distwit::PointCloud random_cloud(std::size_t n, std::size_t dim, std::uint64_t seed, double lo = 0.0,
                                        double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> xy(n * dim);
  for (double& v : xy) v = u(rng);
  return distwit::PointCloud(dim, std::move(xy));
}

inline distwit::PointCloud cloud(std::size_t dim, std::vector<double> xy) { return distwit::PointCloud(dim, std::move(xy)); }

inline double sq(double x) { return x * x; }

inline double sq_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += sq(a[i] - b[i]);
  return s;
}

}  // namespace testing
