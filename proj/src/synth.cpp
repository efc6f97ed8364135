#include "distwit/synth.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace distwit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kGolden = 0.6180339887498949;  // 1/phi

// Tube angle with density proportional to R + r cos(psi): inverts
// (R psi + r sin psi) / (2 pi R) = t by Newton iteration.
double torus_tube_angle(double t, double R, double r) {
  double psi = kTwoPi * t;
  for (int it = 0; it < 60; ++it) {
    const double f = R * psi + r * std::sin(psi) - kTwoPi * R * t;
    const double df = R + r * std::cos(psi);
    const double step = f / df;
    psi -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return psi;
}

struct Mapped {
  std::vector<double> x;
  std::vector<double> normal;
};

Mapped map_point(const SamplerSpec& s, double u, double v) {
  switch (s.shape) {
    case ShapeKind::circle: {
      const double a = kTwoPi * u;
      return {{s.R * std::cos(a), s.R * std::sin(a)}, {std::cos(a), std::sin(a)}};
    }
    case ShapeKind::line_segment:
      return {{s.R * u, 0.0}, {0.0, 1.0}};
    case ShapeKind::sphere2: {
      const double z = 1.0 - 2.0 * u;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double a = kTwoPi * v;
      const std::vector<double> nrm{rho * std::cos(a), rho * std::sin(a), z};
      return {{s.R * nrm[0], s.R * nrm[1], s.R * nrm[2]}, nrm};
    }
    case ShapeKind::torus3: {
      const double psi = torus_tube_angle(u, s.R, s.r);
      const double theta = kTwoPi * v;
      const double ring = s.R + s.r * std::cos(psi);
      return {{ring * std::cos(theta), ring * std::sin(theta), s.r * std::sin(psi)},
              {std::cos(psi) * std::cos(theta), std::cos(psi) * std::sin(theta), std::sin(psi)}};
    }
    case ShapeKind::flat_torus4: {
      const double a = kTwoPi * u, b = kTwoPi * v;
      return {{s.R * std::cos(a), s.R * std::sin(a), s.r * std::cos(b), s.r * std::sin(b)},
              {std::cos(a), std::sin(a), 0.0, 0.0}};
    }
  }
  return {};
}

PointCloud generate(const SamplerSpec& s, std::size_t n, std::uint64_t seed, bool noisy, std::optional<double> phase) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double offset = phase ? *phase : unit(rng);
  std::vector<double> coords;
  std::size_t dim = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double jitter = phase ? *phase : unit(rng);
    const double u = (static_cast<double>(i) + jitter) / static_cast<double>(n);
    double v = static_cast<double>(i) * kGolden + offset;
    v -= std::floor(v);
    Mapped p = map_point(s, u, v);
    if (noisy && s.noise > 0.0) {
      const double t = s.noise * (2.0 * unit(rng) - 1.0);
      for (std::size_t k = 0; k < p.x.size(); ++k) p.x[k] += t * p.normal[k];
    }
    dim = p.x.size();
    coords.insert(coords.end(), p.x.begin(), p.x.end());
  }
  if (n == 0) return {};
  return PointCloud(dim, std::move(coords));
}

}  // namespace

ShapeKind parse_shape(const std::string& name) {
  if (name == "circle") return ShapeKind::circle;
  if (name == "sphere2" || name == "sphere") return ShapeKind::sphere2;
  if (name == "torus3" || name == "torus") return ShapeKind::torus3;
  if (name == "flat_torus4") return ShapeKind::flat_torus4;
  if (name == "line_segment" || name == "segment") return ShapeKind::line_segment;
  throw InputError("synth", "unknown shape '" + name + "'");
}

std::string to_string(ShapeKind s) {
  switch (s) {
    case ShapeKind::circle: return "circle";
    case ShapeKind::sphere2: return "sphere2";
    case ShapeKind::torus3: return "torus3";
    case ShapeKind::flat_torus4: return "flat_torus4";
    case ShapeKind::line_segment: return "line_segment";
  }
  return "?";
}

int intrinsic_dim(ShapeKind s) {
  switch (s) {
    case ShapeKind::circle:
    case ShapeKind::line_segment: return 1;
    default: return 2;
  }
}

void SamplerSpec::validate() const {
  if (n < 1) throw InputError("synth", "n must be >= 1");
  if (!(R > 0.0)) throw InputError("synth", "R must be positive");
  if ((shape == ShapeKind::torus3 || shape == ShapeKind::flat_torus4) && !(r > 0.0))
    throw InputError("synth", "r must be positive");
  if (shape == ShapeKind::torus3 && !(R > r)) throw InputError("synth", "torus needs R > r");
  if (!(noise >= 0.0)) throw InputError("synth", "noise must be nonnegative");
  if (phase && !(*phase >= 0.0 && *phase < 1.0)) throw InputError("synth", "phase must lie in [0, 1)");
}

Sample sample(const SamplerSpec& spec) {
  spec.validate();
  Sample out;
  out.cloud = generate(spec, spec.n, spec.seed, true, spec.phase);
  if (spec.estimate_coverage) {
    const std::size_t probes = std::min<std::size_t>(2 * spec.n, 20000);
    const PointCloud ref = generate(spec, probes, spec.seed ^ 0x9e3779b97f4a7c15ull, false, std::nullopt);
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < out.cloud.size(); ++j) {
        double d = 0.0;
        for (std::size_t k = 0; k < ref.dim(); ++k) d += (ref(i, k) - out.cloud(j, k)) * (ref(i, k) - out.cloud(j, k));
        best = std::min(best, d);
      }
      worst = std::max(worst, best);
    }
    out.eps_hat = std::sqrt(worst);
  }
  return out;
}

double implicit_residual(const SamplerSpec& spec, std::span<const double> x) {
  auto norm2 = [](double a, double b) { return std::sqrt(a * a + b * b); };
  switch (spec.shape) {
    case ShapeKind::circle: return std::abs(norm2(x[0], x[1]) - spec.R);
    case ShapeKind::line_segment:
      return std::abs(x[1]) + std::max({0.0, -x[0], x[0] - spec.R});
    case ShapeKind::sphere2: return std::abs(std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]) - spec.R);
    case ShapeKind::torus3: {
      const double ring = norm2(x[0], x[1]) - spec.R;
      return std::abs(ring * ring + x[2] * x[2] - spec.r * spec.r);
    }
    case ShapeKind::flat_torus4:
      return std::abs(norm2(x[0], x[1]) - spec.R) + std::abs(norm2(x[2], x[3]) - spec.r);
  }
  return 0.0;
}

}  // namespace distwit
