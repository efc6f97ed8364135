#include "distwit/dmatrix.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

namespace distwit {

namespace {

constexpr char kMagic[4] = {'D', 'W', 'I', 'T'};

std::vector<std::vector<double>> read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("dmatrix", "cannot open " + path.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        double v = std::stod(cell, &used);
        if (cell.find_first_not_of(" \t\r", used) != std::string::npos) throw std::invalid_argument(cell);
        row.push_back(v);
      } catch (const std::exception&) {
        throw InputError("dmatrix", path.string() + ":" + std::to_string(lineno) + ": cannot parse '" + cell + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    auto bytes = std::bit_cast<std::array<unsigned char, sizeof(T)>>(v);
    std::reverse(bytes.begin(), bytes.end());
    return std::bit_cast<T>(bytes);
  }
  return v;
}

}  // namespace

PointCloud::PointCloud(std::size_t n, std::size_t dim) : n_(n), dim_(dim), coords_(n * dim, 0.0) {}

PointCloud::PointCloud(std::size_t dim, std::vector<double> coords)
    : n_(dim ? coords.size() / dim : 0), dim_(dim), coords_(std::move(coords)) {
  if (dim == 0 || coords_.size() % dim != 0)
    throw InputError("dmatrix", "coordinate count is not a multiple of the dimension");
  for (double c : coords_)
    if (!std::isfinite(c)) throw InputError("dmatrix", "non-finite coordinate");
}

PointCloud PointCloud::subset(std::span<const PointId> ids) const {
  PointCloud out(ids.size(), dim_);
  for (std::size_t r = 0; r < ids.size(); ++r)
    std::copy_n(coords_.begin() + static_cast<std::ptrdiff_t>(ids[r] * dim_), dim_,
                out.coords_.begin() + static_cast<std::ptrdiff_t>(r * dim_));
  return out;
}

DistanceMatrix::DistanceMatrix(std::size_t n) : n_(n), d2_(n * (n + 1) / 2, 0.0) {}

double DistanceMatrix::dist(std::size_t i, std::size_t j) const { return std::sqrt(d2(i, j)); }

double DistanceMatrix::max_d2() const {
  return d2_.empty() ? 0.0 : *std::max_element(d2_.begin(), d2_.end());
}

DistanceMatrix distance_matrix_from_table(const std::vector<std::vector<double>>& rows) {
  const std::size_t n = rows.size();
  if (n == 0) throw InputError("dmatrix", "empty distance table");
  double max_entry = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw InputError("dmatrix", "row " + std::to_string(i) + " has " + std::to_string(rows[i].size()) +
                                      " entries, expected " + std::to_string(n));
    for (std::size_t j = 0; j < n; ++j) {
      double v = rows[i][j];
      if (!std::isfinite(v)) throw InputError("dmatrix", "non-finite entry");
      if (v < 0.0)
        throw InputError("dmatrix", "negative entry at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      max_entry = std::max(max_entry, v);
    }
  }
  const double tol = 1e-9 * max_entry;
  DistanceMatrix dm(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i][i] > tol) throw InputError("dmatrix", "nonzero diagonal at " + std::to_string(i));
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(rows[i][j] - rows[j][i]) > tol)
        throw InputError("dmatrix", "asymmetric entries at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      dm.set_d2(i, j, rows[i][j] * rows[i][j]);
    }
  }
  return dm;
}

DistanceMatrix load_distance_matrix(const std::filesystem::path& path, MatrixFormat format) {
  if (format == MatrixFormat::csv) return distance_matrix_from_table(read_csv_table(path));

  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("dmatrix", "cannot open " + path.string());
  char magic[4];
  std::uint32_t n = 0;
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0)
    throw InputError("dmatrix", path.string() + ": bad magic");
  if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) throw InputError("dmatrix", "truncated header");
  n = to_little(n);
  if (n == 0) throw InputError("dmatrix", "empty matrix");
  DistanceMatrix dm(n);
  std::vector<double> buf(dm.data().size());
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double))))
    throw InputError("dmatrix", path.string() + ": truncated payload");
  if (in.peek() != std::char_traits<char>::eof()) throw InputError("dmatrix", path.string() + ": trailing bytes");
  std::size_t k = 0;
  double max_entry = 0.0;
  for (double& v : buf) {
    v = to_little(v);
    if (!std::isfinite(v) || v < 0.0) throw InputError("dmatrix", "negative or non-finite squared distance");
    max_entry = std::max(max_entry, v);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j, ++k) {
      if (i == j && buf[k] > 1e-9 * max_entry)
        throw InputError("dmatrix", "nonzero diagonal at " + std::to_string(i));
      dm.set_d2(i, j, i == j ? 0.0 : buf[k]);
    }
  return dm;
}

void save_distance_matrix_binary(const DistanceMatrix& dm, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("dmatrix", "cannot write " + path.string());
  out.write(kMagic, 4);
  auto n = to_little(static_cast<std::uint32_t>(dm.size()));
  out.write(reinterpret_cast<const char*>(&n), sizeof n);
  for (double v : dm.data()) {
    double le = to_little(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof le);
  }
}

void save_distance_matrix_csv(const DistanceMatrix& dm, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("dmatrix", "cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < dm.size(); ++i) {
    for (std::size_t j = 0; j < dm.size(); ++j) out << (j ? "," : "") << dm.dist(i, j);
    out << '\n';
  }
}

DistanceMatrix from_point_cloud(const PointCloud& cloud) {
  const std::size_t n = cloud.size();
  DistanceMatrix dm(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto a = cloud.point(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto b = cloud.point(j);
      double s = 0.0;
      for (std::size_t k = 0; k < cloud.dim(); ++k) {
        double t = a[k] - b[k];
        s += t * t;
      }
      dm.set_d2(i, j, s);
    }
  }
  return dm;
}

PointCloud load_point_cloud(const std::filesystem::path& path) {
  auto rows = read_csv_table(path);
  if (rows.empty()) throw InputError("dmatrix", path.string() + ": no points");
  const std::size_t dim = rows.front().size();
  std::vector<double> coords;
  coords.reserve(rows.size() * dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != dim)
      throw InputError("dmatrix", path.string() + ": row " + std::to_string(i) + " has inconsistent dimension");
    coords.insert(coords.end(), rows[i].begin(), rows[i].end());
  }
  return PointCloud(dim, std::move(coords));
}

void save_point_cloud(const PointCloud& cloud, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("dmatrix", "cannot write " + path.string());
  out << std::setprecision(17);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t k = 0; k < cloud.dim(); ++k) out << (k ? "," : "") << cloud(i, k);
    out << '\n';
  }
}

namespace {

void check_triple(const DistanceMatrix& dm, PointId a, PointId b, PointId c, double tol, TriangleReport& rep) {
  const PointId v[3] = {a, b, c};
  // side opposite each vertex against the sum of the other two
  for (int r = 0; r < 3; ++r) {
    PointId i = v[(r + 1) % 3], j = v[(r + 2) % 3], k = v[r];
    double excess = dm.dist(i, j) - dm.dist(i, k) - dm.dist(k, j);
    if (excess > tol) rep.violations.push_back({i, j, k, excess});
  }
  ++rep.triples_checked;
}

}  // namespace

TriangleReport validate_triangle(const DistanceMatrix& dm, std::size_t sample_count, double tol, std::uint64_t seed) {
  TriangleReport rep;
  const auto n = static_cast<PointId>(dm.size());
  if (n < 3) return rep;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<PointId> pick(0, n - 1);
  for (std::size_t s = 0; s < sample_count; ++s) {
    PointId a = pick(rng), b = pick(rng), c = pick(rng);
    if (a == b || b == c || a == c) continue;
    check_triple(dm, a, b, c, tol, rep);
  }
  return rep;
}

TriangleReport validate_triangle_exhaustive(const DistanceMatrix& dm, double tol) {
  if (dm.size() > 500) throw InputError("dmatrix", "exhaustive triangle check limited to n <= 500");
  TriangleReport rep;
  const auto n = static_cast<PointId>(dm.size());
  for (PointId a = 0; a < n; ++a)
    for (PointId b = a + 1; b < n; ++b)
      for (PointId c = b + 1; c < n; ++c) check_triple(dm, a, b, c, tol, rep);
  return rep;
}

}  // namespace distwit
