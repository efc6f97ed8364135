#include "distwit/scomplex.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>

#include "distwit/simplexgeo.hpp"

#include <json.hpp>

namespace distwit {

namespace {

const std::vector<Simplex> kNone;

std::size_t find_index(const std::vector<Simplex>& sorted, const Simplex& s) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), s);
  return static_cast<std::size_t>(it - sorted.begin());
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

SimplicialComplex SimplicialComplex::closure_of(std::vector<Simplex> generators) {
  SimplicialComplex k;
  for (Simplex& g : generators) {
    std::sort(g.begin(), g.end());
    g.erase(std::unique(g.begin(), g.end()), g.end());
    for (std::size_t size = 1; size <= g.size(); ++size) for_each_face(g, size, [&](const Simplex& f) { k.insert(f); });
  }
  k.normalize();
  return k;
}

void SimplicialComplex::insert(Simplex s) {
  if (s.empty()) return;
  const auto d = static_cast<std::size_t>(s.size() - 1);
  if (by_dim_.size() <= d) by_dim_.resize(d + 1);
  by_dim_[d].push_back(std::move(s));
}

void SimplicialComplex::normalize() {
  for (auto& level : by_dim_) {
    std::sort(level.begin(), level.end());
    level.erase(std::unique(level.begin(), level.end()), level.end());
  }
  while (!by_dim_.empty() && by_dim_.back().empty()) by_dim_.pop_back();
}

const std::vector<Simplex>& SimplicialComplex::simplices(int dim) const {
  if (dim < 0 || dim > max_dim()) return kNone;
  return by_dim_[static_cast<std::size_t>(dim)];
}

std::size_t SimplicialComplex::total() const {
  std::size_t t = 0;
  for (const auto& level : by_dim_) t += level.size();
  return t;
}

bool SimplicialComplex::contains(const Simplex& s) const {
  if (s.empty()) return false;
  const auto& level = simplices(dimension(s));
  return std::binary_search(level.begin(), level.end(), s);
}

bool SimplicialComplex::is_downward_closed() const {
  for (int d = 1; d <= max_dim(); ++d)
    for (const Simplex& s : simplices(d))
      for (PointId v : s)
        if (!contains(opposite_face(s, v))) return false;
  return true;
}

std::vector<PointId> SimplicialComplex::vertices() const {
  std::vector<PointId> out;
  for (const Simplex& s : simplices(0)) out.push_back(s[0]);
  return out;
}

bool check_membership(const SimplicialComplex& k, const Simplex& s) { return k.contains(s); }

void write_jsonl(const SimplicialComplex& k, std::ostream& out) {
  for (int d = 0; d <= k.max_dim(); ++d)
    for (const Simplex& s : k.simplices(d)) out << to_string(s) << '\n';
}

std::string to_jsonl(const SimplicialComplex& k) {
  std::ostringstream os;
  write_jsonl(k, os);
  return os.str();
}

SimplicialComplex read_jsonl(std::istream& in) {
  SimplicialComplex k;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Simplex s;
    try {
      const auto j = nlohmann::json::parse(line);
      if (!j.is_array() || j.empty()) throw InputError("scomplex", "line " + std::to_string(line_no) + ": not a simplex");
      for (const auto& v : j) s.push_back(v.get<PointId>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError("scomplex", "line " + std::to_string(line_no) + ": " + e.what());
    }
    std::sort(s.begin(), s.end());
    k.insert(std::move(s));
  }
  k.normalize();
  return k;
}

long long euler_characteristic(const SimplicialComplex& k) {
  long long chi = 0;
  for (int d = 0; d <= k.max_dim(); ++d) chi += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(k.count(d));
  return chi;
}

std::size_t boundary_rank_mod2(const SimplicialComplex& k, int dim, std::optional<unsigned> shuffle_seed) {
  if (dim <= 0 || dim > k.max_dim()) return 0;
  const auto& rows = k.simplices(dim - 1);
  const auto& cols = k.simplices(dim);
  const std::size_t words = (rows.size() + 63) / 64;

  std::vector<std::size_t> order(cols.size());
  std::iota(order.begin(), order.end(), 0);
  if (shuffle_seed) {
    std::mt19937 rng(*shuffle_seed);
    std::shuffle(order.begin(), order.end(), rng);
  }

  std::vector<std::vector<std::uint64_t>> basis;  // reduced columns, indexed by pivot
  std::map<std::size_t, std::size_t> pivot_of;    // lowest set row -> basis slot
  for (std::size_t c : order) {
    std::vector<std::uint64_t> col(words, 0);
    for (PointId v : cols[c]) {
      const std::size_t r = find_index(rows, opposite_face(cols[c], v));
      col[r / 64] ^= std::uint64_t{1} << (r % 64);
    }
    while (true) {
      std::size_t low = rows.size();
      for (std::size_t w = words; w-- > 0;)
        if (col[w]) {
          low = w * 64 + (63 - static_cast<std::size_t>(__builtin_clzll(col[w])));
          break;
        }
      if (low == rows.size()) break;
      auto it = pivot_of.find(low);
      if (it == pivot_of.end()) {
        pivot_of.emplace(low, basis.size());
        basis.push_back(std::move(col));
        break;
      }
      const auto& b = basis[it->second];
      for (std::size_t w = 0; w < words; ++w) col[w] ^= b[w];
    }
  }
  return basis.size();
}

std::vector<long long> betti_mod2(const SimplicialComplex& k, int up_to) {
  std::vector<long long> betti;
  for (int d = 0; d <= up_to; ++d) {
    const auto n = static_cast<long long>(k.count(d));
    betti.push_back(n - static_cast<long long>(boundary_rank_mod2(k, d)) -
                    static_cast<long long>(boundary_rank_mod2(k, d + 1)));
  }
  return betti;
}

std::size_t connected_components(const SimplicialComplex& k) {
  const auto verts = k.vertices();
  if (verts.empty()) return 0;
  UnionFind uf(verts.size());
  auto at = [&](PointId v) {
    return static_cast<std::size_t>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
  };
  for (const Simplex& e : k.simplices(1)) uf.unite(at(e[0]), at(e[1]));
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < verts.size(); ++i) roots.insert(uf.find(i));
  return roots.size();
}

ManifoldReport closed_manifold_check(const SimplicialComplex& k, int m) {
  ManifoldReport rep;
  rep.m = m;
  rep.components = connected_components(k);
  auto note = [&](const std::string& what) {
    if (rep.problems.size() < 10) rep.problems.push_back(what);
  };

  // (a) purity
  rep.pure = k.count(m) > 0 && k.max_dim() <= m;
  if (k.max_dim() > m) note("simplices above dimension " + std::to_string(m));
  {
    SimplicialComplex top = SimplicialComplex::closure_of(k.simplices(m));
    for (int d = 0; d < m; ++d)
      for (const Simplex& s : k.simplices(d))
        if (!top.contains(s)) {
          rep.pure = false;
          note("maximal simplex " + to_string(s) + " below dimension " + std::to_string(m));
        }
  }

  // (b) every (m-1)-simplex has exactly two m-cofaces
  rep.boundary2 = m >= 1 && k.count(m) > 0;
  if (m >= 1) {
    const auto& ridges = k.simplices(m - 1);
    std::vector<int> cofaces(ridges.size(), 0);
    for (const Simplex& s : k.simplices(m))
      for (PointId v : s) ++cofaces[find_index(ridges, opposite_face(s, v))];
    for (std::size_t i = 0; i < ridges.size(); ++i)
      if (cofaces[i] != 2) {
        rep.boundary2 = false;
        note(to_string(ridges[i]) + " has " + std::to_string(cofaces[i]) + " cofaces");
      }
  }

  // (c) vertex links
  if (m == 1) {
    rep.links = rep.boundary2;
  } else if (m == 2) {
    bool ok = true;
    std::map<PointId, std::vector<std::pair<PointId, PointId>>> link_edges;
    for (const Simplex& t : k.simplices(2))
      for (PointId v : t) {
        Simplex e = opposite_face(t, v);
        link_edges[v].emplace_back(e[0], e[1]);
      }
    for (PointId v : k.vertices()) {
      auto it = link_edges.find(v);
      if (it == link_edges.end()) {
        ok = false;
        note("vertex " + std::to_string(v) + " has empty link");
        continue;
      }
      std::map<PointId, int> degree;
      std::map<PointId, std::size_t> slot;
      for (auto [a, b] : it->second) {
        ++degree[a];
        ++degree[b];
        slot.emplace(a, slot.size());
        slot.emplace(b, slot.size());
      }
      bool cycle = std::all_of(degree.begin(), degree.end(), [](const auto& kv) { return kv.second == 2; });
      UnionFind uf(slot.size());
      for (auto [a, b] : it->second) uf.unite(slot[a], slot[b]);
      std::set<std::size_t> roots;
      for (const auto& kv : slot) roots.insert(uf.find(kv.second));
      cycle = cycle && roots.size() == 1;
      if (!cycle) {
        ok = false;
        note("link of vertex " + std::to_string(v) + " is not a single cycle");
      }
    }
    rep.links = ok;
  }
  return rep;
}

PointCloud classical_mds(const DistanceMatrix& dm, const std::vector<PointId>& ids, std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(ids.size());
  Eigen::MatrixXd b(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      b(i, j) = dm.d2(static_cast<std::size_t>(ids[static_cast<std::size_t>(i)]),
                      static_cast<std::size_t>(ids[static_cast<std::size_t>(j)]));
  const Eigen::MatrixXd centering =
      Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  b = -0.5 * centering * b * centering;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(b);
  if (eig.info() != Eigen::Success) throw Error("scomplex", "eigendecomposition failed");
  PointCloud out(ids.size(), dim);
  bool any = n <= 1;
  for (std::size_t c = 0; c < dim && static_cast<Eigen::Index>(c) < n; ++c) {
    const Eigen::Index col = n - 1 - static_cast<Eigen::Index>(c);  // eigenvalues ascending
    const double lambda = eig.eigenvalues()(col);
    if (lambda <= 0.0) continue;
    any = true;
    for (Eigen::Index i = 0; i < n; ++i) out(static_cast<std::size_t>(i), c) = eig.eigenvectors()(i, col) * std::sqrt(lambda);
  }
  if (!any) throw Error("scomplex", "multidimensional scaling found no positive eigenvalue");
  return out;
}

void export_off(const SimplicialComplex& k, int m, const std::optional<PointCloud>& coords, const DistanceMatrix* dm,
                const std::filesystem::path& path) {
  if (m > 2) throw InputError("scomplex", "OFF export supports m <= 2");
  const auto verts = k.vertices();
  PointCloud layout;
  if (coords) {
    layout = coords->subset(verts);
  } else if (dm) {
    layout = classical_mds(*dm, verts, 3);
  } else {
    throw InputError("scomplex", "OFF export needs coordinates or a distance matrix");
  }
  auto at = [&](PointId v) { return std::lower_bound(verts.begin(), verts.end(), v) - verts.begin(); };

  std::ofstream out(path);
  if (!out) throw InputError("scomplex", "cannot write " + path.string());
  out << "OFF\n" << verts.size() << ' ' << k.count(2) << ' ' << k.count(1) << '\n';
  out << std::setprecision(17);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t c = 0; c < 3; ++c) out << (c ? " " : "") << (c < layout.dim() ? layout(i, c) : 0.0);
    out << '\n';
  }
  for (const Simplex& t : k.simplices(2)) out << "3 " << at(t[0]) << ' ' << at(t[1]) << ' ' << at(t[2]) << '\n';
  for (const Simplex& e : k.simplices(1)) out << "# edge " << at(e[0]) << ' ' << at(e[1]) << '\n';
}

}  // namespace distwit
