#include "distwit/witness.hpp"

#include <algorithm>

#include "distwit/parallel.hpp"
#include "distwit/simplexgeo.hpp"

namespace distwit {

namespace {

using Keyed = std::pair<double, PointId>;

std::vector<Keyed> weighted_distances(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w,
                                      PointId witness) {
  std::vector<Keyed> keyed;
  keyed.reserve(net.size());
  for (PointId p : net.landmark_ids)
    keyed.emplace_back(dm.d2(static_cast<std::size_t>(witness), static_cast<std::size_t>(p)) - w.w2(p), p);
  return keyed;
}

}  // namespace

WitnessOrder witness_order(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, PointId witness,
                           std::size_t depth) {
  if (depth == 0) throw InputError("witness", "depth must be >= 1");
  auto keyed = weighted_distances(dm, net, w, witness);
  const std::size_t k = std::min(depth, keyed.size());
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(k), keyed.end());
  WitnessOrder out;
  out.witness = witness;
  for (std::size_t i = 0; i < k; ++i) {
    out.landmarks.push_back(keyed[i].second);
    out.values.push_back(keyed[i].first);
  }
  return out;
}

std::vector<Simplex> witnessed_by(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, PointId witness,
                                  int max_dim) {
  auto keyed = weighted_distances(dm, net, w, witness);
  const std::size_t nl = keyed.size();
  const std::size_t depth = std::min(static_cast<std::size_t>(max_dim) + 1, nl);
  // ranks 0..depth sorted so the rank right after each cut is known
  const std::size_t sorted = std::min(depth + 1, nl);
  std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(sorted), keyed.end());

  std::vector<Simplex> out;
  for (std::size_t size = 1; size <= depth; ++size) {
    const double v = keyed[size - 1].first;
    if (size == nl || keyed[size].first != v) {
      Simplex s;
      for (std::size_t i = 0; i < size; ++i) s.push_back(keyed[i].second);
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
      continue;
    }
    // tie straddles the cut: strict prefix plus every choice among the tied
    std::size_t first_tied = size - 1;
    while (first_tied > 0 && keyed[first_tied - 1].first == v) --first_tied;
    Simplex prefix;
    for (std::size_t i = 0; i < first_tied; ++i) prefix.push_back(keyed[i].second);
    Simplex tied;
    for (const auto& [val, p] : keyed)
      if (val == v) tied.push_back(p);
    std::sort(tied.begin(), tied.end());
    for_each_face(tied, size - first_tied, [&](const Simplex& choice) {
      Simplex s = prefix;
      s.insert(s.end(), choice.begin(), choice.end());
      std::sort(s.begin(), s.end());
      out.push_back(std::move(s));
    });
  }
  return out;
}

std::vector<std::vector<Simplex>> witnessed_sets(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w,
                                                 std::span<const PointId> witnesses, int max_dim, unsigned threads) {
  const auto levels = static_cast<std::size_t>(max_dim) + 1;
  threads = std::max(1u, threads);
  std::vector<std::vector<std::vector<Simplex>>> partial(threads, std::vector<std::vector<Simplex>>(levels));
  const std::size_t block = (witnesses.size() + threads - 1) / threads;
  parallel_for(threads, threads, [&](std::size_t t) {
    const std::size_t lo = t * block, hi = std::min(witnesses.size(), lo + block);
    for (std::size_t i = lo; i < hi; ++i)
      for (Simplex& s : witnessed_by(dm, net, w, witnesses[i], max_dim))
        partial[t][s.size() - 1].push_back(std::move(s));
  });
  std::vector<std::vector<Simplex>> sets(levels);
  for (std::size_t d = 0; d < levels; ++d) {
    for (auto& part : partial) sets[d].insert(sets[d].end(), part[d].begin(), part[d].end());
    std::sort(sets[d].begin(), sets[d].end());
    sets[d].erase(std::unique(sets[d].begin(), sets[d].end()), sets[d].end());
  }
  return sets;
}

SimplicialComplex build_witness_complex(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, int m,
                                        std::span<const PointId> witnesses, unsigned threads) {
  const auto sets = witnessed_sets(dm, net, w, witnesses, m + 1, threads);
  SimplicialComplex k;
  for (const Simplex& v : sets[0]) k.insert(v);
  k.normalize();
  for (std::size_t d = 1; d < sets.size(); ++d) {
    std::vector<Simplex> kept;
    for (const Simplex& s : sets[d]) {
      bool faces = true;
      for (PointId v : s)
        if (!k.contains(opposite_face(s, v))) {
          faces = false;
          break;
        }
      if (faces) kept.push_back(s);
    }
    for (Simplex& s : kept) k.insert(std::move(s));
    k.normalize();
  }
  k.over_dimension = k.max_dim() > m;
  return k;
}

SimplicialComplex build_witness_complex(const DistanceMatrix& dm, const Net& net, const WeightAssignment& w, int m,
                                        unsigned threads) {
  return build_witness_complex(dm, net, w, m, net.witness_ids, threads);
}

}  // namespace distwit
