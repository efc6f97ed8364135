#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "distwit/dmatrix.hpp"

namespace distwit {

enum class ShapeKind { circle, sphere2, torus3, flat_torus4, line_segment };

ShapeKind parse_shape(const std::string& name);
std::string to_string(ShapeKind s);

/// Intrinsic dimension of the sampled manifold.
int intrinsic_dim(ShapeKind s);

struct SamplerSpec {
  ShapeKind shape = ShapeKind::circle;
  std::size_t n = 100;
  double R = 1.0;   // circle/sphere radius, torus core radius, segment length, first flat-torus radius
  double r = 0.5;   // torus tube radius, second flat-torus radius
  double noise = 0.0;  // offset along a normal, uniform in [-noise, noise]
  std::uint64_t seed = 0;
  /// Fixed stratum offset in [0,1) instead of random jitter.
  std::optional<double> phase;
  bool estimate_coverage = true;

  void validate() const;
};

struct Sample {
  PointCloud cloud;
  /// Largest distance from a probe point of the manifold to the sample;
  /// negative when not estimated.
  double eps_hat = -1.0;
};

/// Stratified parameter sampling mapped onto the shape; deterministic per seed.
Sample sample(const SamplerSpec& spec);

/// Residual of the shape's implicit equation at a point (0 on the manifold).
double implicit_residual(const SamplerSpec& spec, std::span<const double> x);

}  // namespace distwit
