#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/labeled_graph.hpp"
#include "schreier/rational.hpp"
#include "schreier/word.hpp"

namespace schreier {

struct SpectrumReport {
  std::vector<double> eigenvalues;  // descending, with multiplicity
  double lambda0 = 0.0;
  double lambda1 = 0.0;  // equals lambda0 when n == 1
  double lambda_minus = 0.0;
  double gap = 0.0;
};

struct ExpansionReport {
  enum class Kind { EdgeCheeger, SetExpansion };
  Kind kind = Kind::EdgeCheeger;
  Rational value;
  std::vector<int> witness;  // sorted; lexicographically smallest minimizer
};

struct BipartitenessReport {
  Rational psi;
  std::vector<int> psi_witness;      // the set S attaining psi
  std::vector<int> psi_cut_side;     // max-cut side within the span of S
  std::int64_t e_s = 0;              // edges removed to bipartition span(S)
  std::int64_t k_s = 0;              // boundary edges of S
  Rational c;                        // min over |S| <= n/2 of kS/|S| (= Ch)
  std::vector<int> c_witness;
  Rational r;                        // e(V)/n
  std::vector<int> r_cut_side;       // max-cut side of the whole graph
};

namespace detail {

inline Eigen::MatrixXd adjacency_matrix(const Multigraph& m) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m.n, m.n);
  for (auto [u, v] : m.edges) {
    if (u == v) {
      a(u, u) += 2.0;  // loops add 2 on the diagonal (walk convention)
    } else {
      a(u, v) += 1.0;
      a(v, u) += 1.0;
    }
  }
  return a;
}

inline std::vector<int> mask_to_vertices(std::uint32_t mask,
                                         const std::vector<int>& universe) {
  std::vector<int> out;
  for (std::size_t i = 0; i < universe.size(); ++i)
    if (mask & (1u << i)) out.push_back(universe[i]);
  return out;
}

/// rational compare a/b < c/d for nonnegative small ints, plus lexicographic
/// witness tie-break. Returns true when (num,den,wit) improves on best.
inline bool improves(std::int64_t num, std::int64_t den,
                     const std::vector<int>& wit, bool have_best,
                     std::int64_t bnum, std::int64_t bden,
                     const std::vector<int>& bwit) {
  if (!have_best) return true;
  std::int64_t lhs = num * bden, rhs = bnum * den;
  if (lhs != rhs) return lhs < rhs;
  return std::lexicographical_compare(wit.begin(), wit.end(), bwit.begin(),
                                      bwit.end());
}

}  // namespace detail

/// Dense symmetric spectrum of the adjacency matrix, sorted descending.
inline SpectrumReport spectrum(const Multigraph& m) {
  if (m.n < 1) throw ValidationError("spectrum needs at least one vertex");
  if (m.n > 4096) throw SizeGuardError("spectrum guard: n > 4096");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      detail::adjacency_matrix(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw Error("eigensolver failed to converge");
  SpectrumReport rep;
  rep.eigenvalues.assign(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + m.n);
  std::reverse(rep.eigenvalues.begin(), rep.eigenvalues.end());
  rep.lambda0 = rep.eigenvalues.front();
  rep.lambda1 = rep.eigenvalues[m.n > 1 ? 1 : 0];
  rep.lambda_minus = rep.eigenvalues.back();
  rep.gap = rep.lambda0 - rep.lambda1;
  return rep;
}

/// Exact edge-Cheeger constant Ch(m) = min |L(A)|/|A| over 0 < 2|A| <= n,
/// by Gray-code enumeration with incremental boundary updates. Loops never
/// cross a cut. Witness ties break to the lexicographically smallest set.
inline ExpansionReport edge_cheeger_exact(const Multigraph& m,
                                          bool allow_disconnected = false) {
  if (m.n < 2) throw ValidationError("cheeger needs at least two vertices");
  if (m.n > 20) throw SizeGuardError("cheeger guard: n > 20");
  if (!allow_disconnected && !is_connected(m))
    throw DisconnectedError("graph is disconnected (pass allow_disconnected)");

  // Multiplicity-weighted adjacency rows.
  std::vector<std::vector<std::pair<int, int>>> adj(m.n);  // (neighbor, mult)
  {
    std::map<std::pair<int, int>, int> mult;
    for (auto [u, v] : m.edges)
      if (u != v) ++mult[{u, v}];
    for (const auto& [uv, c] : mult) {
      adj[uv.first].emplace_back(uv.second, c);
      adj[uv.second].emplace_back(uv.first, c);
    }
  }

  std::uint32_t total = 1u << m.n;
  std::uint32_t in_a = 0;
  std::int64_t boundary = 0;
  int size = 0;
  bool have_best = false;
  std::int64_t bnum = 0, bden = 1;
  std::vector<int> bwit;
  std::vector<int> universe(m.n);
  for (int i = 0; i < m.n; ++i) universe[i] = i;

  for (std::uint32_t i = 1; i < total; ++i) {
    std::uint32_t gray = i ^ (i >> 1);
    std::uint32_t prev = (i - 1) ^ ((i - 1) >> 1);
    int v = __builtin_ctz(gray ^ prev);
    bool entering = gray & (1u << v);
    for (auto [w, c] : adj[v]) {
      bool w_in = in_a & (1u << w);
      // edge (v,w) flips between crossing and internal
      boundary += (w_in == entering) ? -c : c;
    }
    in_a = gray;
    size += entering ? 1 : -1;
    if (size >= 1 && 2 * size <= m.n) {
      if (!have_best || boundary * bden <= bnum * size) {
        auto wit = detail::mask_to_vertices(in_a, universe);
        if (detail::improves(boundary, size, wit, have_best, bnum, bden,
                             bwit)) {
          have_best = true;
          bnum = boundary;
          bden = size;
          bwit = std::move(wit);
        }
      }
    }
  }
  ExpansionReport rep;
  rep.kind = ExpansionReport::Kind::EdgeCheeger;
  rep.value = Rational(bnum, bden);
  rep.witness = std::move(bwit);
  return rep;
}

/// Exact set expansion h = min |AS \ A| / |A| over nonempty A within the
/// domain with 2|A| <= |domain|, where S is a list of words acting on g.
/// The domain defaults to all vertices; it must be setwise invariant under
/// every word of S.
inline ExpansionReport set_expansion_exact(
    const SLabeledGraph& g, const std::vector<Word>& maps,
    std::optional<std::vector<int>> domain = std::nullopt) {
  std::vector<int> dom;
  if (domain) {
    dom = *domain;
    std::sort(dom.begin(), dom.end());
    dom.erase(std::unique(dom.begin(), dom.end()), dom.end());
  } else {
    dom.resize(g.n());
    for (int i = 0; i < g.n(); ++i) dom[i] = i;
  }
  if (dom.empty()) throw ValidationError("empty domain");
  if (dom.size() > 20) throw SizeGuardError("set expansion guard: |domain| > 20");

  std::vector<int> pos(g.n(), -1);
  for (std::size_t i = 0; i < dom.size(); ++i) pos[dom[i]] = static_cast<int>(i);

  const int d = static_cast<int>(dom.size());
  // Per domain point, the OR of images under every map.
  std::vector<std::uint32_t> point_image(d, 0);
  for (const Word& w : maps) {
    for (int i = 0; i < d; ++i) {
      int img = apply_word(g, dom[i], w);
      if (img < 0 || img >= g.n() || pos[img] == -1)
        throw DomainNotInvariantError("a map carries the domain outside itself");
      point_image[i] |= 1u << pos[img];
    }
  }

  std::uint32_t total = 1u << d;
  bool have_best = false;
  std::int64_t bnum = 0, bden = 1;
  std::vector<int> bwit;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    int size = __builtin_popcount(mask);
    if (2 * size > d) continue;
    std::uint32_t image = 0;
    std::uint32_t rest = mask;
    while (rest) {
      int i = __builtin_ctz(rest);
      rest &= rest - 1;
      image |= point_image[i];
    }
    std::int64_t out = __builtin_popcount(image & ~mask);
    if (!have_best || out * bden <= bnum * size) {
      auto wit = detail::mask_to_vertices(mask, dom);
      if (detail::improves(out, size, wit, have_best, bnum, bden, bwit)) {
        have_best = true;
        bnum = out;
        bden = size;
        bwit = std::move(wit);
      }
    }
  }
  ExpansionReport rep;
  rep.kind = ExpansionReport::Kind::SetExpansion;
  rep.value = Rational(bnum, bden);
  rep.witness = std::move(bwit);
  return rep;
}

/// Symmetric closure of an alphabet as words: every letter and its inverse.
inline std::vector<Word> letters_symmetric(const SLabeledGraph& g) {
  std::vector<Word> out;
  out.reserve(2 * g.k());
  for (int s = 0; s < g.k(); ++s) {
    out.push_back(Word::letter(s, +1));
    out.push_back(Word::letter(s, -1));
  }
  return out;
}

namespace detail {

struct SpanData {
  std::vector<std::pair<int, int>> span_edges;  // endpoints re-indexed into S
  std::int64_t span_loops = 0;                  // loops inside S
  std::int64_t boundary = 0;
};

inline SpanData span_of(const Multigraph& m, const std::vector<int>& s_sorted) {
  std::vector<int> pos(m.n, -1);
  for (std::size_t i = 0; i < s_sorted.size(); ++i)
    pos[s_sorted[i]] = static_cast<int>(i);
  SpanData out;
  for (auto [u, v] : m.edges) {
    bool iu = pos[u] != -1, iv = pos[v] != -1;
    if (iu && iv) {
      if (u == v)
        ++out.span_loops;
      else
        out.span_edges.emplace_back(pos[u], pos[v]);
    } else if (iu != iv) {
      if (u != v) ++out.boundary;
    }
  }
  return out;
}

/// Brute-force max-cut over the span; returns (maxcut, best side mask).
inline std::pair<std::int64_t, std::uint32_t> max_cut(
    const std::vector<std::pair<int, int>>& edges, int nverts) {
  std::int64_t best = 0;
  std::uint32_t best_mask = 0;
  std::uint32_t total = 1u << nverts;
  for (std::uint32_t mask = 0; mask < total; ++mask) {
    std::int64_t cut = 0;
    for (auto [u, v] : edges)
      cut += ((mask >> u) ^ (mask >> v)) & 1u;
    if (cut > best) {
      best = cut;
      best_mask = mask;
    }
  }
  return {best, best_mask};
}

}  // namespace detail

/// e(S) = edges to delete from the span of S to make it bipartite (loops are
/// always deleted), k(S) = boundary edges of S. Exact, by max-cut.
inline std::pair<std::int64_t, std::int64_t> bipartite_costs(
    const Multigraph& m, const std::vector<int>& s) {
  std::vector<int> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  if (sorted.size() > 20) throw SizeGuardError("bipartite costs guard: |S| > 20");
  if (!sorted.empty() && (sorted.front() < 0 || sorted.back() >= m.n))
    throw OutOfRangeError("subset vertex out of range");
  auto span = detail::span_of(m, sorted);
  auto [cut, mask] = detail::max_cut(span.span_edges,
                                     static_cast<int>(sorted.size()));
  std::int64_t e_s =
      static_cast<std::int64_t>(span.span_edges.size()) + span.span_loops - cut;
  return {e_s, span.boundary};
}

/// Desai-Rao psi(G) = min over nonempty S of (e(S)+k(S))/|S|, with exact
/// values and witnesses; also fills c(G) = min_{2|S|<=n} k(S)/|S| and
/// r(G) = e(V)/n.
inline BipartitenessReport psi(const Multigraph& m) {
  if (m.n < 1) throw ValidationError("psi needs at least one vertex");
  if (m.n > 14) throw SizeGuardError("psi guard: n > 14");
  std::vector<int> universe(m.n);
  for (int i = 0; i < m.n; ++i) universe[i] = i;

  BipartitenessReport rep;
  bool have_psi = false, have_c = false;
  std::int64_t pnum = 0, pden = 1, cnum = 0, cden = 1;
  std::vector<int> pwit, cwit;
  std::uint32_t psi_mask_side = 0;

  std::uint32_t total = 1u << m.n;
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    auto s = detail::mask_to_vertices(mask, universe);
    auto span = detail::span_of(m, s);
    auto [cut, side] =
        detail::max_cut(span.span_edges, static_cast<int>(s.size()));
    std::int64_t e_s = static_cast<std::int64_t>(span.span_edges.size()) +
                       span.span_loops - cut;
    std::int64_t k_s = span.boundary;
    std::int64_t size = static_cast<std::int64_t>(s.size());
    if (detail::improves(e_s + k_s, size, s, have_psi, pnum, pden, pwit)) {
      have_psi = true;
      pnum = e_s + k_s;
      pden = size;
      pwit = s;
      psi_mask_side = side;
      rep.e_s = e_s;
      rep.k_s = k_s;
    }
    if (2 * size <= m.n &&
        detail::improves(k_s, size, s, have_c, cnum, cden, cwit)) {
      have_c = true;
      cnum = k_s;
      cden = size;
      cwit = s;
    }
    if (mask == total - 1) {  // S = V: r(G) = e(V)/n
      rep.r = Rational(e_s, m.n);
      rep.r_cut_side = detail::mask_to_vertices(side, universe);
    }
  }
  rep.psi = Rational(pnum, pden);
  rep.psi_witness = pwit;
  rep.psi_cut_side = detail::mask_to_vertices(psi_mask_side, pwit);
  rep.c = Rational(cnum, cden);
  rep.c_witness = cwit;
  return rep;
}

struct EigenvalueBoundReport {
  double lambda_min = 0.0;
  Rational psi_value;
  Rational c_value;
  Rational r_value;
  double desai_rao_bound = 0.0;  // -d + psi^2 / 4d
  bool desai_rao_pass = false;
  double psi_lower_bound = 0.0;  // min{c, rc/2d, r/4}
  bool psi_lower_pass = false;
};

/// Checks the Desai-Rao inequality q_min >= -d + psi^2/4d (1e-6 slack on the
/// eigenvalue side) and the psi lower bound psi >= min{c, rc/2d, r/4}
/// (exact rationals) on a connected d-regular multigraph.
inline EigenvalueBoundReport eigenvalue_bound_checks(const Multigraph& m,
                                                     int d) {
  if (!is_connected(m)) throw DisconnectedError("bound checks need a connected graph");
  for (int deg : m.degrees())
    if (deg != d) throw NotRegularError("graph is not d-regular");
  BipartitenessReport bip = psi(m);
  SpectrumReport spec = spectrum(m);
  EigenvalueBoundReport rep;
  rep.lambda_min = spec.lambda_minus;
  rep.psi_value = bip.psi;
  rep.c_value = bip.c;
  rep.r_value = bip.r;
  double p = to_double(bip.psi);
  rep.desai_rao_bound = -d + p * p / (4.0 * d);
  rep.desai_rao_pass = rep.lambda_min >= rep.desai_rao_bound - 1e-6;
  Rational rc_over_2d = bip.r * bip.c / Rational(2 * d);
  Rational r_over_4 = bip.r / Rational(4);
  Rational bound = std::min({bip.c, rc_over_2d, r_over_4});
  rep.psi_lower_bound = to_double(bound);
  rep.psi_lower_pass = bip.psi >= bound;
  return rep;
}

struct GraflemmaReport {
  double f_value = 0.0;
  double spread = 0.0;
  bool pass = false;
};

/// F(f) = sum_v max(0, max over edges (v,w) of f(w)-f(v)) >= max f - min f
/// on a connected graph.
inline GraflemmaReport graflemma_value(const Multigraph& m,
                                       const std::vector<double>& f) {
  if (static_cast<int>(f.size()) != m.n)
    throw ShapeMismatchError("function length must equal vertex count");
  if (!is_connected(m)) throw DisconnectedError("graflemma needs a connected graph");
  std::vector<double> rise(m.n, 0.0);
  for (auto [u, v] : m.edges) {
    if (u == v) continue;
    rise[u] = std::max(rise[u], f[v] - f[u]);
    rise[v] = std::max(rise[v], f[u] - f[v]);
  }
  GraflemmaReport rep;
  for (double x : rise) rep.f_value += x;
  rep.spread = *std::max_element(f.begin(), f.end()) -
               *std::min_element(f.begin(), f.end());
  rep.pass = rep.f_value >= rep.spread - 1e-12;
  return rep;
}

struct SmallSetExpansionReport {
  Rational h_base;        // h(X,S) over the letters of g
  Rational bound;         // h(X,S) / k
  Rational worst_ratio;   // min over tested A of |AT \ A| / |A|
  std::vector<int> worst_witness;
  std::int64_t sets_checked = 0;
  bool pass = false;
};

/// Verifies |AT \ A| / |A| >= h(X,S)/k for every A with 0 < |A| <= n/2k,
/// where T is a symmetric list of subgroup generator words and k the index.
inline SmallSetExpansionReport small_set_expansion_check(
    const SLabeledGraph& g, const std::vector<Word>& t_words, int index_k) {
  if (g.n() > 20) throw SizeGuardError("small set expansion guard: n > 20");
  if (index_k < 1) throw ValidationError("index must be positive");
  SmallSetExpansionReport rep;
  rep.h_base = set_expansion_exact(g, letters_symmetric(g)).value;
  rep.bound = rep.h_base / Rational(index_k);

  std::vector<std::uint32_t> point_image(g.n(), 0);
  for (const Word& w : t_words)
    for (int v = 0; v < g.n(); ++v)
      point_image[v] |= 1u << apply_word(g, v, w);

  const int max_size = g.n() / (2 * index_k);
  bool have_worst = false;
  std::int64_t wnum = 0, wden = 1;
  std::vector<int> universe(g.n());
  for (int i = 0; i < g.n(); ++i) universe[i] = i;

  std::uint32_t total = 1u << g.n();
  for (std::uint32_t mask = 1; mask < total; ++mask) {
    int size = __builtin_popcount(mask);
    if (size > max_size) continue;
    std::uint32_t image = 0;
    std::uint32_t rest = mask;
    while (rest) {
      int i = __builtin_ctz(rest);
      rest &= rest - 1;
      image |= point_image[i];
    }
    std::int64_t out = __builtin_popcount(image & ~mask);
    ++rep.sets_checked;
    auto wit = detail::mask_to_vertices(mask, universe);
    if (detail::improves(out, size, wit, have_worst, wnum, wden,
                         rep.worst_witness)) {
      have_worst = true;
      wnum = out;
      wden = size;
      rep.worst_witness = std::move(wit);
    }
  }
  rep.worst_ratio = have_worst ? Rational(wnum, wden) : Rational(0);
  rep.pass = !have_worst || rep.worst_ratio >= rep.bound;
  return rep;
}

}  // namespace schreier
