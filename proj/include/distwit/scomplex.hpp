#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "distwit/dmatrix.hpp"
#include "distwit/types.hpp"

namespace distwit {

/// Abstract simplicial complex stored as sorted per-dimension lists.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;

  /// Closure of the given simplices (each is sorted first).
  static SimplicialComplex closure_of(std::vector<Simplex> generators);

  /// Adds one simplex without adding its faces. Call normalize() after a
  /// batch of inserts.
  void insert(Simplex s);
  void normalize();

  const std::vector<Simplex>& simplices(int dim) const;
  std::size_t count(int dim) const { return simplices(dim).size(); }
  std::size_t total() const;
  /// -1 for the empty complex.
  int max_dim() const { return static_cast<int>(by_dim_.size()) - 1; }
  bool empty() const { return by_dim_.empty(); }

  bool contains(const Simplex& s) const;
  bool is_downward_closed() const;

  std::vector<PointId> vertices() const;

  /// Simplices above the expected intrinsic dimension are kept but flagged.
  bool over_dimension = false;

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) { return a.by_dim_ == b.by_dim_; }

 private:
  std::vector<std::vector<Simplex>> by_dim_;
};

bool check_membership(const SimplicialComplex& k, const Simplex& s);

/// One simplex per line, e.g. "[0,4,9]", dimension ascending then lexicographic.
void write_jsonl(const SimplicialComplex& k, std::ostream& out);
std::string to_jsonl(const SimplicialComplex& k);
SimplicialComplex read_jsonl(std::istream& in);

long long euler_characteristic(const SimplicialComplex& k);

/// Rank of the mod-2 boundary map from dim-simplices to (dim-1)-simplices.
std::size_t boundary_rank_mod2(const SimplicialComplex& k, int dim, std::optional<unsigned> shuffle_seed = {});

/// beta_0..beta_up_to over GF(2).
std::vector<long long> betti_mod2(const SimplicialComplex& k, int up_to);

struct ManifoldReport {
  int m = 0;
  bool pure = false;               // every maximal simplex has dimension m
  bool boundary2 = false;          // every (m-1)-simplex lies in exactly two m-simplices
  std::optional<bool> links;       // vertex links are circles (m=2) / point pairs (m=1); unset for m >= 3
  std::size_t components = 0;
  std::vector<std::string> problems;  // first few offending simplices
  bool pass() const { return pure && boundary2 && links.value_or(true); }
};

ManifoldReport closed_manifold_check(const SimplicialComplex& k, int m);

std::size_t connected_components(const SimplicialComplex& k);

/// Writes vertices and triangles as OFF; edges go to comment lines.
/// Without coordinates, vertices are laid out by classical multidimensional
/// scaling of the landmark distances.
void export_off(const SimplicialComplex& k, int m, const std::optional<PointCloud>& coords, const DistanceMatrix* dm,
                const std::filesystem::path& path);

/// Classical MDS of the distance submatrix on `ids` into `dim` coordinates.
PointCloud classical_mds(const DistanceMatrix& dm, const std::vector<PointId>& ids, std::size_t dim);

}  // namespace distwit
