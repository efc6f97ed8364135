#pragma once

#include <span>
#include <vector>

#include "distwit/dmatrix.hpp"
#include "distwit/netsel.hpp"
#include "distwit/scomplex.hpp"
#include "distwit/weightedgeo.hpp"

namespace distwit {

/// Landmarks sorted by weighted distance ||w - p||^2 - omega(p)^2 from one
/// witness, ties by index, truncated to `depth` entries.
struct WitnessOrder {
  PointId witness = -1;
  std::vector<PointId> landmarks;
  std::vector<double> values;
};

WitnessOrder witness_order(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, PointId witness,
                           std::size_t depth);

/// Simplices of dimension 0..max_dim witnessed by one witness. When the
/// weighted distance at the cut is tied, every completion of the strict
/// prefix by tied landmarks is witnessed.
std::vector<Simplex> witnessed_by(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, PointId witness,
                                  int max_dim);

/// W_j: union over `witnesses` of witnessed j-simplices, j = 0..max_dim,
/// each level sorted and duplicate-free.
std::vector<std::vector<Simplex>> witnessed_sets(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w,
                                                 std::span<const PointId> witnesses, int max_dim, unsigned threads = 1);

/// Weighted witness complex up to dimension m+1: a j-simplex is kept iff it
/// is witnessed and all of its (j-1)-faces are kept. Surviving
/// (m+1)-simplices set `over_dimension`.
SimplicialComplex build_witness_complex(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, int m,
                                        unsigned threads = 1);

/// Same, over an explicit witness subset.
SimplicialComplex build_witness_complex(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, int m,
                                        std::span<const PointId> witnesses, unsigned threads = 1);

}  // namespace distwit
