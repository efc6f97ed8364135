#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace distwit {

/// Row index into a DistanceMatrix / PointCloud.
using PointId = std::int32_t;

/// Strictly increasing vertex list. Vertices are point ids of the input.
using Simplex = std::vector<PointId>;

inline int dimension(const Simplex& s) { return static_cast<int>(s.size()) - 1; }

std::string to_string(const Simplex& s);

/// Library errors carry the name of the module that raised them.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const noexcept { return module_; }

 private:
  std::string module_;
};

/// Malformed or invalid input data (exit status 3 in the CLI).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A simplex whose distance submatrix has no Euclidean realization.
class NonEuclideanError : public Error {
 public:
  NonEuclideanError(Simplex s, const std::string& what)
      : Error("simplexgeo", what + " " + to_string(s)), simplex_(std::move(s)) {}
  const Simplex& simplex() const noexcept { return simplex_; }

 private:
  Simplex simplex_;
};

/// Linear system for a weighted center / projection is singular.
class DegenerateError : public Error {
 public:
  using Error::Error;
};

}  // namespace distwit
