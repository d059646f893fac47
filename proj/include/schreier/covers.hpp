#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/labeled_graph.hpp"
#include "schreier/prng.hpp"
#include "schreier/rational.hpp"
#include "schreier/spectral.hpp"

namespace schreier {

/// Lift table f : (letter, base vertex) -> permutation of the d sheets.
struct CoverSpec {
  int d = 1;
  std::vector<std::vector<std::vector<int>>> table;  // [letter][vertex][sheet]

  /// Uniform table via Fisher-Yates, one derived stream per (letter, vertex):
  /// stream = derive(derive(seed, letter), vertex).
  static CoverSpec random(const SLabeledGraph& base, int d,
                          std::uint64_t seed) {
    if (d < 1) throw ValidationError("sheet count must be at least 1");
    CoverSpec spec;
    spec.d = d;
    spec.table.assign(base.k(), {});
    for (int s = 0; s < base.k(); ++s) {
      spec.table[s].reserve(base.n());
      std::uint64_t letter_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
      for (int x = 0; x < base.n(); ++x) {
        SplitMix64 rng(derive_seed(letter_seed, static_cast<std::uint64_t>(x)));
        spec.table[s].push_back(random_permutation(d, rng));
      }
    }
    return spec;
  }
};

/// A verified covering: total, base, and the vertex projection. The
/// constructor path always checks label equivariance (epsilon = 0).
struct CoveringMap {
  SLabeledGraph total;
  SLabeledGraph base;
  std::vector<int> proj;
};

/// Fraction of total vertices at which label equivariance fails for some
/// letter; a genuine covering has epsilon = 0. Throws if some base vertex has
/// no preimage (the induced edge map would miss its edges).
inline Rational verify_covering(const SLabeledGraph& total,
                                const SLabeledGraph& base,
                                const std::vector<int>& proj) {
  if (static_cast<int>(proj.size()) != total.n())
    throw ShapeMismatchError("projection length must equal total vertex count");
  if (!(total.alphabet() == base.alphabet()))
    throw AlphabetMismatchError("total and base alphabets differ");
  std::vector<char> hit(base.n(), 0);
  for (int v : proj) {
    if (v < 0 || v >= base.n()) throw OutOfRangeError("projection image out of range");
    hit[v] = 1;
  }
  for (int x = 0; x < base.n(); ++x)
    if (!hit[x])
      throw NotSurjectiveError("base vertex " + std::to_string(x) +
                               " has no preimage");
  if (total.n() == 0) return Rational(0);
  std::int64_t defective = 0;
  for (int v = 0; v < total.n(); ++v) {
    bool ok = true;
    for (int s = 0; s < total.k() && ok; ++s)
      if (proj[total.perm(s)[v]] != base.perm(s)[proj[v]]) ok = false;
    if (!ok) ++defective;
  }
  return Rational(defective, total.n());
}

/// Applies a lift table: vertices (x,k) indexed x*d + k, with
/// (x,k) . s = (x.s, k . f(s,x)) and projection (x,k) -> x.
inline CoveringMap apply_cover(const SLabeledGraph& base,
                               const CoverSpec& spec) {
  const int d = spec.d;
  const int total_n = base.n() * d;
  std::vector<std::vector<int>> perms(base.k(), std::vector<int>(total_n));
  for (int s = 0; s < base.k(); ++s)
    for (int x = 0; x < base.n(); ++x) {
      const std::vector<int>& sheet_perm = spec.table[s][x];
      if (static_cast<int>(sheet_perm.size()) != d)
        throw ShapeMismatchError("lift table entry has wrong sheet count");
      int target = base.perm(s)[x];
      for (int k = 0; k < d; ++k)
        perms[s][x * d + k] = target * d + sheet_perm[k];
    }
  CoveringMap cover;
  cover.total = build_graph(total_n, base.alphabet(), std::move(perms));
  cover.base = base;
  cover.proj.resize(total_n);
  for (int v = 0; v < total_n; ++v) cover.proj[v] = v / d;
  if (verify_covering(cover.total, cover.base, cover.proj) != Rational(0))
    throw Error("internal: constructed cover failed verification");
  return cover;
}

/// Uniform random d-cover with a named deterministic stream per
/// (letter, base vertex).
inline CoveringMap random_cover(const SLabeledGraph& base, int d,
                                std::uint64_t seed) {
  return apply_cover(base, CoverSpec::random(base, d, seed));
}

struct LevelStats {
  int n = 0;
  std::optional<int> girth;
  int components = 0;
};

/// A random (d1, d2, ..., dm)-cover: levels[0] is the start graph and
/// maps[i] covers levels[i+1] -> levels[i].
struct Tower {
  std::vector<SLabeledGraph> levels;
  std::vector<CoveringMap> maps;
  std::vector<LevelStats> stats;

  const SLabeledGraph& top() const { return levels.back(); }
};

inline LevelStats level_stats(const SLabeledGraph& g) {
  Multigraph view = undirected_view(g);
  GraphStats st = graph_stats(view);
  return LevelStats{g.n(), st.girth, st.component_count};
}

/// Folds random_cover with per-level derived seeds (child = derive(seed, i)).
inline Tower iterated_random_cover(const SLabeledGraph& base,
                                   const std::vector<int>& degrees,
                                   std::uint64_t seed) {
  if (degrees.empty()) throw ValidationError("degree schedule must be nonempty");
  for (int d : degrees)
    if (d < 2) throw ValidationError("cover degrees must be at least 2");
  Tower tower;
  tower.levels.push_back(base);
  tower.stats.push_back(level_stats(base));
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    CoveringMap map = random_cover(tower.levels.back(), degrees[i],
                                   derive_seed(seed, i));
    tower.levels.push_back(map.total);
    tower.stats.push_back(level_stats(map.total));
    tower.maps.push_back(std::move(map));
  }
  return tower;
}

/// Old/new eigenvalue split: spectrum(base) matched greedily into
/// spectrum(total) within 1e-6; the remainder are the new eigenvalues.
inline std::pair<std::vector<double>, std::vector<double>> new_eigenvalues(
    const CoveringMap& cover) {
  SpectrumReport base_spec = spectrum(undirected_view(cover.base));
  SpectrumReport total_spec = spectrum(undirected_view(cover.total));
  std::vector<char> used(total_spec.eigenvalues.size(), 0);
  std::vector<double> old;
  for (double lambda : base_spec.eigenvalues) {
    int best = -1;
    double best_diff = 0.0;
    for (std::size_t i = 0; i < total_spec.eigenvalues.size(); ++i) {
      if (used[i]) continue;
      double diff = std::abs(total_spec.eigenvalues[i] - lambda);
      if (best == -1 || diff < best_diff) {
        best = static_cast<int>(i);
        best_diff = diff;
      }
    }
    if (best == -1 || best_diff > 1e-6)
      throw MatchFailureError("base eigenvalue unmatched within tolerance");
    used[best] = 1;
    old.push_back(total_spec.eigenvalues[best]);
  }
  std::vector<double> fresh;
  for (std::size_t i = 0; i < total_spec.eigenvalues.size(); ++i)
    if (!used[i]) fresh.push_back(total_spec.eigenvalues[i]);
  return {std::move(old), std::move(fresh)};
}

/// Two-edge surgery joining two covers of the same base into one cover:
/// erase the s-edges (p1, p1 s), (p2, p2 s) and glue in (p1, p2 s),
/// (p2, p1 s). Requires aligned fibers and girth > 2 on both totals.
inline CoveringMap glue(const CoveringMap& p1_cover, const CoveringMap& p2_cover,
                        int s, int p1, int p2) {
  if (!(p1_cover.base == p2_cover.base))
    throw BaseMismatchError("glue needs covers of the same base");
  if (s < 0 || s >= p1_cover.base.k()) throw OutOfRangeError("letter out of range");
  if (p1 < 0 || p1 >= p1_cover.total.n() || p2 < 0 || p2 >= p2_cover.total.n())
    throw OutOfRangeError("glue vertex out of range");
  if (p1_cover.proj[p1] != p2_cover.proj[p2])
    throw FiberMismatchError("glue points sit over different base vertices");
  for (const CoveringMap* c : {&p1_cover, &p2_cover}) {
    auto g = girth(undirected_view(c->total));
    if (g && *g <= 2)
      throw GirthTooSmallError("glue requires girth > 2 on both totals");
  }

  const SLabeledGraph& t1 = p1_cover.total;
  const SLabeledGraph& t2 = p2_cover.total;
  const int n1 = t1.n();
  const int n = n1 + t2.n();
  std::vector<std::vector<int>> perms(t1.k(), std::vector<int>(n));
  for (int letter = 0; letter < t1.k(); ++letter) {
    for (int v = 0; v < n1; ++v) perms[letter][v] = t1.perm(letter)[v];
    for (int v = 0; v < t2.n(); ++v)
      perms[letter][n1 + v] = n1 + t2.perm(letter)[v];
  }
  int u1 = t1.perm(s)[p1];            // p1 s in P1
  int u2 = n1 + t2.perm(s)[p2];       // p2 s in P2, shifted
  perms[s][p1] = u2;
  perms[s][n1 + p2] = u1;

  CoveringMap out;
  out.total = build_graph(n, t1.alphabet(), std::move(perms));
  out.base = p1_cover.base;
  out.proj.resize(n);
  for (int v = 0; v < n1; ++v) out.proj[v] = p1_cover.proj[v];
  for (int v = 0; v < t2.n(); ++v) out.proj[n1 + v] = p2_cover.proj[v];
  if (verify_covering(out.total, out.base, out.proj) != Rational(0))
    throw Error("internal: glued graph failed covering verification");
  return out;
}

/// Crossing edges of the V(P1) cut in a glued graph; the surgery makes this
/// exactly 2, giving Ch <= 2 / min(|P1|, |P2|).
inline std::int64_t glue_cut_crossings(const CoveringMap& glued, int n1) {
  std::int64_t crossing = 0;
  const SLabeledGraph& g = glued.total;
  for (int s = 0; s < g.k(); ++s)
    for (int v = 0; v < g.n(); ++v)
      if ((v < n1) != (g.perm(s)[v] < n1)) ++crossing;
  return crossing;
}

struct GirthBoostResult {
  Tower tower;
  int tries = 0;
  int depth = 0;
};

/// Samples iterated random covers (degree-2 schedule, depth growing with the
/// retries) until the girth strictly exceeds girth(g). A single random cover
/// does not boost girth almost surely, hence the depth growth. Vertex count
/// per sample is capped; the depth stops growing at the cap.
inline GirthBoostResult girth_boosting_cover(const SLabeledGraph& g,
                                             std::uint64_t seed, int max_tries,
                                             int vertex_cap = 100000) {
  if (max_tries < 1) throw ValidationError("max_tries must be at least 1");
  if (g.n() < 1) throw ValidationError("empty graph");
  auto base_girth = girth(undirected_view(g));
  for (int t = 0; t < max_tries; ++t) {
    int depth = 1 + t / 4;
    while (depth > 1 &&
           static_cast<std::int64_t>(g.n()) << depth > vertex_cap)
      --depth;
    std::vector<int> degrees(depth, 2);
    Tower tower = iterated_random_cover(g, degrees, derive_seed(seed, t));
    auto top_girth = tower.stats.back().girth;
    // A labeled graph's view is 2k-regular, so base_girth is always finite.
    bool boosted = base_girth && (!top_girth || *top_girth > *base_girth);
    if (boosted) return GirthBoostResult{std::move(tower), t + 1, depth};
  }
  throw RetriesExhaustedError("girth boost failed within " +
                              std::to_string(max_tries) + " tries");
}

}  // namespace schreier
