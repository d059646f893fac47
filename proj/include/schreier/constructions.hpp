#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schreier/covers.hpp"
#include "schreier/errors.hpp"
#include "schreier/labeled_graph.hpp"
#include "schreier/prng.hpp"
#include "schreier/rational.hpp"
#include "schreier/spectral.hpp"
#include "schreier/subgroups.hpp"
#include "schreier/word.hpp"

namespace schreier {

// ---------------------------------------------------------------------------
// SL(2,p) base family
// ---------------------------------------------------------------------------

inline bool is_prime(int p) {
  if (p < 2) return false;
  for (int q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

/// Action of x1 = [[1,1],[0,1]] and x2 = [[1,0],[1,1]] (mod p) on SL(2,p) by
/// right multiplication; p(p^2-1) vertices, transitive.
inline SLabeledGraph sl2p_graph(int p) {
  if (!is_prime(p) || p < 5) throw NotPrimeError("p must be a prime >= 5");
  auto code = [p](int a, int b, int c, int d) {
    return ((static_cast<std::int64_t>(a) * p + b) * p + c) * p + d;
  };
  std::vector<std::array<int, 4>> elements;
  std::vector<int> index(static_cast<std::size_t>(p) * p * p * p, -1);
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int d = 0; d < p; ++d)
          if (((a * d - b * c) % p + p) % p == 1) {
            index[code(a, b, c, d)] = static_cast<int>(elements.size());
            elements.push_back({a, b, c, d});
          }
  const int n = static_cast<int>(elements.size());
  if (n != static_cast<std::int64_t>(p) * (p * p - 1))
    throw Error("internal: wrong SL(2,p) order");

  std::vector<int> by_x1(n), by_x2(n);
  for (int i = 0; i < n; ++i) {
    auto [a, b, c, d] = elements[i];
    by_x1[i] = index[code(a, (a + b) % p, c, (c + d) % p)];  // M * [[1,1],[0,1]]
    by_x2[i] = index[code((a + b) % p, b, (c + d) % p, d)];  // M * [[1,0],[1,1]]
  }
  SLabeledGraph g = build_graph(n, Alphabet({"x1", "x2"}),
                                {std::move(by_x1), std::move(by_x2)});
  if (!is_connected(undirected_view(g)))
    throw NotTransitiveError("SL(2,p) generators failed to act transitively");
  return g;
}

inline std::vector<SLabeledGraph> sl2p_family(const std::vector<int>& primes) {
  std::vector<SLabeledGraph> out;
  out.reserve(primes.size());
  for (int p : primes) out.push_back(sl2p_graph(p));
  return out;
}

// ---------------------------------------------------------------------------
// The bad Schreier graphs (rossztau) and the Lubotzky-Zuk chain (lubtau)
// ---------------------------------------------------------------------------

/// Builds a labeled graph whose letters are the given words acting on g.
inline SLabeledGraph word_action_graph(const SLabeledGraph& g,
                                       const std::vector<Word>& words) {
  std::vector<std::string> names;
  names.reserve(words.size());
  for (const Word& w : words) names.push_back(format_word(w, g.alphabet()));
  std::vector<std::vector<int>> perms;
  perms.reserve(words.size());
  for (const Word& w : words) perms.push_back(word_permutation(g, w));
  return build_graph(g.n(), Alphabet(std::move(names)), std::move(perms));
}

struct RossztauResult {
  SLabeledGraph g_graph;        // action of F{x1,x2,t,c} on two base sheets
  SubgroupRep h;                // index-2 kernel of x1,x2,c -> 1, t -> flip
  GeneratorSet t_words;         // Nielsen-Schreier generators of h
  SLabeledGraph t_graph;        // the t_words acting on g_graph's vertices
  std::vector<int> witness;     // sheet-0 copy of the base
  std::int64_t crossing_edges;  // T-edges leaving the witness; always 4
  Rational ch_bound;            // 4 / |witness|
};

/// Doubles a transitive 2-letter base into the 4-letter bad graph: sheets
/// indexed sheet*n + v, t swaps the sheets, c is the 3-cycle through
/// (0, sheet0), (1, sheet0), (1, sheet1). The sheet-0 copy is a cut crossed
/// by exactly 4 edges of the T-action (two from c, two from tct^-1).
inline RossztauResult rossztau_build(const SLabeledGraph& base) {
  if (base.k() != 2)
    throw ValidationError("rossztau base must have exactly two letters");
  const int n = base.n();
  if (n < 3) throw TooSmallError("rossztau base needs at least 3 vertices");
  detail::require_transitive(base, 0);

  const int total = 2 * n;
  std::vector<int> by_x1(total), by_x2(total), by_t(total), by_c(total);
  for (int sheet = 0; sheet < 2; ++sheet)
    for (int v = 0; v < n; ++v) {
      int i = sheet * n + v;
      by_x1[i] = sheet * n + base.perm(0)[v];
      by_x2[i] = sheet * n + base.perm(1)[v];
      by_t[i] = (1 - sheet) * n + v;
      by_c[i] = i;
    }
  const int e1 = 0, e2 = 1, e3 = n + 1;  // e3 = e2 . t
  by_c[e1] = e2;
  by_c[e2] = e3;
  by_c[e3] = e1;

  RossztauResult out;
  out.g_graph = build_graph(total, Alphabet({"x1", "x2", "t", "c"}),
                            {by_x1, by_x2, by_t, by_c});

  // H = ker(phi), phi(x1) = phi(x2) = phi(c) = 1, phi(t) = t.
  out.h = make_subgroup_rep(
      build_graph(2, Alphabet({"x1", "x2", "t", "c"}),
                  {{0, 1}, {0, 1}, {1, 0}, {0, 1}}),
      0);
  out.t_words = schreier_machinery(out.h.action, out.h.basepoint).second;
  out.t_graph = word_action_graph(out.g_graph, out.t_words.words);

  out.witness.resize(n);
  for (int v = 0; v < n; ++v) out.witness[v] = v;
  std::int64_t crossing = 0;
  for (int s = 0; s < out.t_graph.k(); ++s)
    for (int v = 0; v < total; ++v)
      if ((v < n) != (out.t_graph.perm(s)[v] < n)) ++crossing;
  out.crossing_edges = crossing;
  if (crossing != 4)
    throw Error("internal: rossztau witness cut has " +
                std::to_string(crossing) + " crossings, expected 4");
  out.ch_bound = Rational(4, n);
  return out;
}

struct LubtauMember {
  SubgroupRep rep;           // pointed action of F{x1,x2,t,c}
  std::vector<int> witness;  // the rossztau sheet-0 set
};

/// Gamma_n = Stab(e_{n,2}); e2 is vertex 1 of the doubled graph.
inline LubtauMember lubtau_member(const RossztauResult& r) {
  return LubtauMember{SubgroupRep{r.g_graph, 1}, r.witness};
}

struct LubtauLevel {
  int level = 0;
  std::int64_t index = 0;
  Rational bound;                // min over members of crossing / |pullback|
  std::int64_t crossing = 0;     // crossing count of the reported bound
  std::int64_t witness_size = 0;
};

struct LubtauReport {
  std::vector<LubtauLevel> levels;
  bool truncated = false;  // index cap hit, chain reported up to that point
};

/// Folds Gamma_n = intersection of the first n members through the product
/// action and reports, per level, the index and a witness-based Cheeger
/// upper bound for the T-action: the rossztau sheet-0 witness pulled back
/// through each coordinate, recounted exactly.
inline LubtauReport lubtau_chain_report(
    const std::vector<LubtauMember>& members, const GeneratorSet& t,
    std::int64_t max_index) {
  if (members.empty()) throw ValidationError("lubtau needs at least one member");
  for (const auto& m : members)
    if (!(m.rep.action.alphabet() == members[0].rep.action.alphabet()))
      throw AlphabetMismatchError("lubtau members must share the alphabet");
  if (max_index < 1) throw ValidationError("index cap must be positive");

  LubtauReport report;
  SLabeledGraph current = members[0].rep.action;
  int current_bp = members[0].rep.basepoint;
  std::vector<std::vector<int>> coords(current.n());
  for (int v = 0; v < current.n(); ++v) coords[v] = {v};

  auto emit_level = [&](int level) {
    SLabeledGraph t_graph = word_action_graph(current, t.words);
    LubtauLevel lv;
    lv.level = level;
    lv.index = current.n();
    bool have = false;
    for (std::size_t j = 0; j < coords[0].size(); ++j) {
      std::vector<char> in_w(members[j].rep.action.n(), 0);
      for (int w : members[j].witness) in_w[w] = 1;
      std::vector<char> pulled(current.n());
      std::int64_t wsize = 0;
      for (int v = 0; v < current.n(); ++v) {
        pulled[v] = in_w[coords[v][j]];
        wsize += pulled[v];
      }
      if (wsize == 0 || 2 * wsize > current.n()) continue;
      std::int64_t crossing = 0;
      for (int s = 0; s < t_graph.k(); ++s)
        for (int v = 0; v < current.n(); ++v)
          if (pulled[v] != pulled[t_graph.perm(s)[v]]) ++crossing;
      Rational ratio(crossing, wsize);
      if (!have || ratio < lv.bound) {
        have = true;
        lv.bound = ratio;
        lv.crossing = crossing;
        lv.witness_size = wsize;
      }
    }
    if (!have) throw Error("internal: no usable witness pullback");
    report.levels.push_back(lv);
  };

  emit_level(1);
  for (std::size_t next = 1; next < members.size(); ++next) {
    const SLabeledGraph& b = members[next].rep.action;
    const int nb = b.n();
    auto encode = [nb](int x, int y) {
      return static_cast<std::int64_t>(x) * nb + y;
    };
    std::pair<int, int> start{current_bp, members[next].rep.basepoint};
    std::set<std::int64_t> seen{encode(start.first, start.second)};
    std::vector<std::pair<int, int>> orbit{start};
    std::queue<std::pair<int, int>> q;
    q.push(start);
    bool capped = false;
    while (!q.empty() && !capped) {
      auto [x, y] = q.front();
      q.pop();
      for (int s = 0; s < current.k() && !capped; ++s)
        for (int sign : {+1, -1}) {
          std::pair<int, int> img{current.apply(x, s, sign),
                                  b.apply(y, s, sign)};
          if (seen.insert(encode(img.first, img.second)).second) {
            orbit.push_back(img);
            q.push(img);
            if (static_cast<std::int64_t>(orbit.size()) > max_index) {
              capped = true;
              break;
            }
          }
        }
    }
    if (capped) {
      report.truncated = true;
      return report;
    }

    std::sort(orbit.begin(), orbit.end());
    std::map<std::int64_t, int> pos;
    for (std::size_t i = 0; i < orbit.size(); ++i)
      pos[encode(orbit[i].first, orbit[i].second)] = static_cast<int>(i);
    std::vector<std::vector<int>> perms(current.k(),
                                        std::vector<int>(orbit.size()));
    for (int s = 0; s < current.k(); ++s)
      for (std::size_t i = 0; i < orbit.size(); ++i) {
        auto [x, y] = orbit[i];
        perms[s][i] = pos.at(encode(current.perm(s)[x], b.perm(s)[y]));
      }
    std::vector<std::vector<int>> new_coords(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      new_coords[i] = coords[orbit[i].first];
      new_coords[i].push_back(orbit[i].second);
    }
    current = build_graph(static_cast<int>(orbit.size()), current.alphabet(),
                          std::move(perms));
    current_bp = pos.at(encode(start.first, start.second));
    coords = std::move(new_coords);
    emit_level(static_cast<int>(next) + 1);
  }
  return report;
}

// ---------------------------------------------------------------------------
// The Cheeger distortion audit (nagytetel)
// ---------------------------------------------------------------------------

struct NagytetelReport {
  int k = 0;                   // subgroup index
  Rational h_base;             // h(G, S) over the symmetric letters
  Rational h_orbit;            // h(O, T) on the basepoint orbit
  double bound = 0.0;          // (1/(8 k^(3-log2 3))) min{h(G,S)/k^2, 1}
  bool pass = false;
  std::vector<int> orbit;
  ExpansionReport base_report;
  ExpansionReport orbit_report;
  GeneratorSet t_words;
};

/// Audits h(O,T) > (1/(8 k^(3-log2 3))) min{h(G,S)/k^2, 1} on a finite
/// transitive action (a Cayley graph when the action is regular): T is the
/// Nielsen-Schreier generating set of sub, O the orbit of the identity
/// vertex under T.
inline NagytetelReport nagytetel_audit(const SLabeledGraph& cayley,
                                       const SubgroupRep& sub,
                                       int identity_vertex = 0) {
  if (!(cayley.alphabet() == sub.action.alphabet()))
    throw AlphabetMismatchError("group action and subgroup alphabets differ");
  detail::require_transitive(cayley, 0);

  NagytetelReport rep;
  rep.k = sub.index();
  rep.t_words = schreier_machinery(sub.action, sub.basepoint).second;

  // Orbit of the identity vertex under T (closed under inverses).
  std::vector<char> seen(cayley.n(), 0);
  std::vector<int> orbit;
  std::queue<int> q;
  seen[identity_vertex] = 1;
  q.push(identity_vertex);
  orbit.push_back(identity_vertex);
  auto symmetric = rep.t_words.symmetric_words();
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Word& w : symmetric) {
      int img = apply_word(cayley, v, w);
      if (!seen[img]) {
        seen[img] = 1;
        orbit.push_back(img);
        q.push(img);
      }
    }
  }
  std::sort(orbit.begin(), orbit.end());
  rep.orbit = orbit;

  rep.base_report = set_expansion_exact(cayley, letters_symmetric(cayley));
  rep.orbit_report = set_expansion_exact(cayley, symmetric, orbit);
  rep.h_base = rep.base_report.value;
  rep.h_orbit = rep.orbit_report.value;
  double k = rep.k;
  double factor = 1.0 / (8.0 * std::pow(k, 3.0 - std::log2(3.0)));
  rep.bound = factor * std::min(to_double(rep.h_base) / (k * k), 1.0);
  rep.pass = to_double(rep.h_orbit) > rep.bound;
  return rep;
}

// ---------------------------------------------------------------------------
// The gluing-lemma tower (gluelemma)
// ---------------------------------------------------------------------------

struct TowerConfig {
  Rational delta = Rational(100);    // target gap constant
  double b = 0.0;                    // new-eigenvalue ceiling; 0 = from degree
  int levels = 3;
  int size_cap = 2000;               // max vertices per level
  int retry_budget = 200;            // per cover stage per level
  std::uint64_t seed = 1;
  std::vector<int> first_schedule{2};    // degrees of the smaller cover
  std::vector<int> second_schedule{14};  // degrees of the larger cover

  /// b = d - (d - sqrt(2 d sqrt(d-1)))/2, strictly between 2 sqrt(d-1) and d.
  static double default_b(int d) {
    double window = std::sqrt(2.0 * d * std::sqrt(d - 1.0));
    return d - (d - window) / 2.0;
  }

  void validate(int d) const {
    if (delta <= Rational(0)) throw ValidationError("delta must be positive");
    double ceiling = b;
    if (ceiling != 0.0 &&
        !(2.0 * std::sqrt(d - 1.0) < ceiling && ceiling < d))
      throw ValidationError("b must lie in (2 sqrt(d-1), d)");
    if (levels < 0) throw ValidationError("levels must be nonnegative");
    if (size_cap < 1 || retry_budget < 1)
      throw ValidationError("caps must be positive");
    for (const auto& sched : {first_schedule, second_schedule}) {
      if (sched.empty()) throw ValidationError("schedules must be nonempty");
      for (int deg : sched)
        if (deg < 2) throw ValidationError("cover degrees must be at least 2");
    }
  }
};

struct GlueTowerLevel {
  int level = 0;
  int n = 0;
  int girth_g = 0;
  int girth_k = 0;
  Rational edit_dist;                 // d_e(G_n, K_n)
  std::optional<Rational> ch_upper;   // 2/min part; absent at level 1
  Rational largest_fraction;          // |largest K component| / n
  double max_lambda1_k = 0.0;         // max lambda1 over K components
  int retries_first = 0;
  int retries_second = 0;
};

struct GlueTowerResult {
  Tower g_tower;
  Tower k_tower;
  std::vector<GlueTowerLevel> report;
};

namespace detail {

/// Induced sub-action on a letter-closed vertex subset, plus the sorted
/// vertex list (components of labeled graphs are letter-closed).
inline SLabeledGraph induced_action(const SLabeledGraph& g,
                                    std::vector<int> vertices) {
  std::sort(vertices.begin(), vertices.end());
  std::vector<int> pos(g.n(), -1);
  for (std::size_t i = 0; i < vertices.size(); ++i)
    pos[vertices[i]] = static_cast<int>(i);
  std::vector<std::vector<int>> perms(g.k(), std::vector<int>(vertices.size()));
  for (int s = 0; s < g.k(); ++s)
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      int img = g.perm(s)[vertices[i]];
      if (pos[img] == -1)
        throw ValidationError("vertex set is not closed under the letters");
      perms[s][i] = pos[img];
    }
  return build_graph(static_cast<int>(vertices.size()), g.alphabet(),
                     std::move(perms));
}

inline std::vector<std::vector<int>> letter_components(const SLabeledGraph& g) {
  auto [comp, count] = components_of(undirected_view(g));
  std::vector<std::vector<int>> out(count);
  for (int v = 0; v < g.n(); ++v) out[comp[v]].push_back(v);
  return out;
}

struct StagePick {
  Tower tower;       // iterated cover of g
  Tower k_lift;      // the same lift tables applied to k
  int retries = 0;
};

/// Samples shared iterated covers of (g, k_graph) until: girth strictly
/// increases on both and exceeds 2, the g-lift is connected, and every
/// lifted k-component is connected with lambda1 <= max(lambda1 before, b).
inline StagePick sample_shared_cover(const SLabeledGraph& g,
                                     const SLabeledGraph& k_graph,
                                     const std::vector<int>& schedule,
                                     double b_ceiling, std::uint64_t seed,
                                     int retry_budget) {
  auto g_girth = girth(undirected_view(g));
  auto k_girth = girth(undirected_view(k_graph));
  auto k_comps = letter_components(k_graph);
  std::vector<double> k_lambda1;
  k_lambda1.reserve(k_comps.size());
  for (const auto& comp : k_comps)
    k_lambda1.push_back(
        spectrum(undirected_view(induced_action(k_graph, comp))).lambda1);

  for (int t = 0; t < retry_budget; ++t) {
    std::uint64_t try_seed = derive_seed(seed, t);
    // Shared lift tables: the same CoverSpec drives both towers level by
    // level, which is what makes d_e lift-invariant.
    Tower gt, kt;
    gt.levels.push_back(g);
    gt.stats.push_back(level_stats(g));
    kt.levels.push_back(k_graph);
    kt.stats.push_back(level_stats(k_graph));
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      CoverSpec spec = CoverSpec::random(gt.levels.back(), schedule[i],
                                         derive_seed(try_seed, i));
      CoveringMap gm = apply_cover(gt.levels.back(), spec);
      CoveringMap km = apply_cover(kt.levels.back(), spec);
      gt.levels.push_back(gm.total);
      gt.stats.push_back(level_stats(gm.total));
      gt.maps.push_back(std::move(gm));
      kt.levels.push_back(km.total);
      kt.stats.push_back(level_stats(km.total));
      kt.maps.push_back(std::move(km));
    }

    auto lifted_g_girth = gt.stats.back().girth;
    auto lifted_k_girth = kt.stats.back().girth;
    bool ok = true;
    if (g_girth && !(!lifted_g_girth || *lifted_g_girth > *g_girth)) ok = false;
    if (lifted_g_girth && *lifted_g_girth <= 2) ok = false;
    if (k_girth && !(!lifted_k_girth || *lifted_k_girth > *k_girth)) ok = false;
    if (ok && gt.stats.back().components != 1) ok = false;
    if (ok) {
      // Composed projection from the top of the k tower to k_graph.
      const SLabeledGraph& top = kt.levels.back();
      std::vector<int> proj(top.n());
      for (int v = 0; v < top.n(); ++v) {
        int cur = v;
        for (auto it = kt.maps.rbegin(); it != kt.maps.rend(); ++it)
          cur = it->proj[cur];
        proj[v] = cur;
      }
      for (std::size_t c = 0; c < k_comps.size() && ok; ++c) {
        std::vector<char> in_comp(k_graph.n(), 0);
        for (int v : k_comps[c]) in_comp[v] = 1;
        std::vector<int> lifted;
        for (int v = 0; v < top.n(); ++v)
          if (in_comp[proj[v]]) lifted.push_back(v);
        SLabeledGraph sub = induced_action(top, lifted);
        Multigraph view = undirected_view(sub);
        if (!is_connected(view)) {
          ok = false;
          break;
        }
        double lambda1 = spectrum(view).lambda1;
        if (lambda1 > std::max(k_lambda1[c], b_ceiling) + 1e-9) ok = false;
      }
    }
    if (ok) return StagePick{std::move(gt), std::move(kt), t + 1};
  }
  throw RetriesExhaustedError("cover stage failed within retry budget");
}

/// Composes a tower's covering maps into one map top -> levels[0].
inline CoveringMap composed_map(const Tower& tower) {
  CoveringMap out;
  out.total = tower.levels.back();
  out.base = tower.levels.front();
  out.proj.resize(out.total.n());
  for (int v = 0; v < out.total.n(); ++v) {
    int cur = v;
    for (auto it = tower.maps.rbegin(); it != tower.maps.rend(); ++it)
      cur = it->proj[cur];
    out.proj[v] = cur;
  }
  return out;
}

/// Disjoint union of two actions on a shared alphabet (second block shifted).
inline SLabeledGraph disjoint_union(const SLabeledGraph& a,
                                    const SLabeledGraph& b) {
  std::vector<std::vector<int>> perms(a.k(),
                                      std::vector<int>(a.n() + b.n()));
  for (int s = 0; s < a.k(); ++s) {
    for (int v = 0; v < a.n(); ++v) perms[s][v] = a.perm(s)[v];
    for (int v = 0; v < b.n(); ++v) perms[s][a.n() + v] = a.n() + b.perm(s)[v];
  }
  return build_graph(a.n() + b.n(), a.alphabet(), std::move(perms));
}

}  // namespace detail

/// Runs the two-tower pipeline: per level, a shared iterated cover of
/// (G_n, K_n), a second larger one, K_{n+1} = disjoint union of the K-lifts,
/// G_{n+1} = the two G-lifts glued. Enforces, per level: G connected,
/// d_e(G,K) < delta/50, girth strictly increasing on both, glue cut of
/// exactly 2 edges (Ch <= 2/min part), largest K-component fraction
/// > 1 - delta/(100 d). The second schedule's last degree grows as needed to
/// meet the fraction bound, within the size cap.
inline GlueTowerResult gluelemma_tower(const SLabeledGraph& g1,
                                       TowerConfig config) {
  const int d = 2 * g1.k();
  if (config.b == 0.0) config.b = TowerConfig::default_b(d);
  config.validate(d);
  if (!is_connected(undirected_view(g1)))
    throw DisconnectedError("gluelemma start graph must be connected");

  GlueTowerResult out;
  out.g_tower.levels.push_back(g1);
  out.g_tower.stats.push_back(level_stats(g1));
  out.k_tower.levels.push_back(g1);
  out.k_tower.stats.push_back(level_stats(g1));

  Rational de_bound = config.delta / Rational(50);
  Rational frac_bound = Rational(1) - config.delta / Rational(100 * d);

  auto level_report = [&](int level, const SLabeledGraph& g,
                          const SLabeledGraph& k_graph,
                          std::optional<Rational> ch_upper, int r1, int r2) {
    GlueTowerLevel lv;
    lv.level = level;
    lv.n = g.n();
    auto gg = girth(undirected_view(g));
    auto gk = girth(undirected_view(k_graph));
    lv.girth_g = gg ? *gg : -1;
    lv.girth_k = gk ? *gk : -1;
    lv.edit_dist = edit_distance(g, k_graph);
    lv.ch_upper = ch_upper;
    auto comps = detail::letter_components(k_graph);
    std::size_t largest = 0;
    double max_l1 = 0.0;
    for (const auto& comp : comps) {
      largest = std::max(largest, comp.size());
      max_l1 = std::max(
          max_l1,
          spectrum(undirected_view(detail::induced_action(k_graph, comp)))
              .lambda1);
    }
    lv.largest_fraction = Rational(static_cast<std::int64_t>(largest), g.n());
    lv.max_lambda1_k = max_l1;
    lv.retries_first = r1;
    lv.retries_second = r2;
    out.report.push_back(lv);
  };

  level_report(1, g1, g1, std::nullopt, 0, 0);

  for (int level = 1; level <= config.levels; ++level) {
    const SLabeledGraph g = out.g_tower.levels.back();
    const SLabeledGraph k_graph = out.k_tower.levels.back();
    std::uint64_t level_seed = derive_seed(config.seed, level);

    detail::StagePick first = detail::sample_shared_cover(
        g, k_graph, config.first_schedule, config.b,
        derive_seed(level_seed, 1), config.retry_budget);

    std::int64_t first_size = first.tower.levels.back().n();
    std::vector<int> second_schedule = config.second_schedule;
    std::size_t largest_base = 0;
    for (const auto& comp : detail::letter_components(k_graph))
      largest_base = std::max(largest_base, comp.size());

    for (;;) {
      std::int64_t mult = 1;
      for (int deg : second_schedule) mult *= deg;
      std::int64_t total_n = g.n() * mult + first_size;
      if (total_n > config.size_cap)
        throw CapExceededError("size cap exceeded while sizing second cover");
      // Largest K-component of the union = lift of the largest base comp.
      Rational fraction(static_cast<std::int64_t>(largest_base) * mult,
                        total_n);
      if (fraction > frac_bound) break;
      second_schedule.back() += 1;
    }
    detail::StagePick second = detail::sample_shared_cover(
        g, k_graph, second_schedule, config.b, derive_seed(level_seed, 2),
        config.retry_budget);

    // K_{n+1}: disjoint union of the two K lifts, covering K_n.
    CoveringMap k_first = detail::composed_map(first.k_lift);
    CoveringMap k_second = detail::composed_map(second.k_lift);
    SLabeledGraph k_next =
        detail::disjoint_union(k_first.total, k_second.total);
    CoveringMap k_map;
    k_map.total = k_next;
    k_map.base = k_graph;
    k_map.proj = k_first.proj;
    for (int v : k_second.proj) k_map.proj.push_back(v);
    if (verify_covering(k_map.total, k_map.base, k_map.proj) != Rational(0))
      throw Error("internal: K union failed covering verification");

    // G_{n+1}: glue the two G lifts over base vertex 0, letter 0.
    CoveringMap g_first = detail::composed_map(first.tower);
    CoveringMap g_second = detail::composed_map(second.tower);
    int p1 = 0;
    while (g_first.proj[p1] != 0) ++p1;
    int p2 = 0;
    while (g_second.proj[p2] != 0) ++p2;
    CoveringMap glued = glue(g_first, g_second, 0, p1, p2);
    std::int64_t crossings = glue_cut_crossings(glued, g_first.total.n());
    if (crossings != 2)
      throw Error("internal: glue cut crossed " + std::to_string(crossings) +
                  " edges, expected 2");
    Rational ch_upper(2, std::min(g_first.total.n(), g_second.total.n()));

    if (!is_connected(undirected_view(glued.total)))
      throw Error("internal: glued graph disconnected");
    Rational de = edit_distance(glued.total, k_next);
    if (!(de < de_bound))
      throw CapExceededError("d_e(G,K) = " + to_string(de) +
                             " misses the delta/50 bound " +
                             to_string(de_bound) + "; widen delta");
    Rational frac_exact;
    {
      auto comps = detail::letter_components(k_next);
      std::size_t largest = 0;
      for (const auto& comp : comps) largest = std::max(largest, comp.size());
      frac_exact =
          Rational(static_cast<std::int64_t>(largest), k_next.n());
      if (!(frac_exact > frac_bound))
        throw Error("internal: largest component fraction " +
                    to_string(frac_exact) + " misses bound " +
                    to_string(frac_bound));
    }

    out.g_tower.levels.push_back(glued.total);
    out.g_tower.stats.push_back(level_stats(glued.total));
    out.g_tower.maps.push_back(std::move(glued));
    out.k_tower.levels.push_back(k_next);
    out.k_tower.stats.push_back(level_stats(k_next));
    out.k_tower.maps.push_back(std::move(k_map));

    level_report(level + 1, out.g_tower.levels.back(),
                 out.k_tower.levels.back(), ch_upper, first.retries,
                 second.retries);
  }
  return out;
}

}  // namespace schreier
