#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/rational.hpp"
#include "schreier/word.hpp"

namespace schreier {

/// Ordered list of distinct letter names. Formal inverses are implicit and
/// never stored (a letter and its inverse are never both present).
class Alphabet {
 public:
  Alphabet() = default;

  explicit Alphabet(std::vector<std::string> letters)
      : letters_(std::move(letters)) {
    std::set<std::string> seen;
    for (const auto& l : letters_) {
      if (l.empty()) throw ValidationError("empty letter name");
      if (!seen.insert(l).second)
        throw ValidationError("duplicate letter name '" + l + "'");
    }
  }

  int size() const { return static_cast<int>(letters_.size()); }
  const std::string& name(int i) const { return letters_.at(i); }
  const std::vector<std::string>& names() const { return letters_; }

  int index_of(const std::string& name) const {
    for (int i = 0; i < size(); ++i)
      if (letters_[i] == name) return i;
    throw OutOfRangeError("unknown letter '" + name + "'");
  }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> letters_;
};

/// Undirected multigraph on vertices 0..n-1; edges are an ordered multiset of
/// pairs {u,v} with u <= v, loops allowed. Loops count 2 toward degree.
struct Multigraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  Multigraph() = default;
  Multigraph(int n, std::vector<std::pair<int, int>> e) : n(n) {
    edges.reserve(e.size());
    for (auto [u, v] : e) {
      if (u < 0 || v < 0 || u >= n || v >= n)
        throw OutOfRangeError("edge endpoint out of range");
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    std::sort(edges.begin(), edges.end());
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(n, 0);
    for (auto [u, v] : edges) {
      if (u == v) {
        deg[u] += 2;
      } else {
        deg[u] += 1;
        deg[v] += 1;
      }
    }
    return deg;
  }

  friend bool operator==(const Multigraph&, const Multigraph&) = default;
};

/// A free-group action on a finite vertex set: one permutation per letter.
/// This is a finite Schreier graph for F_S. Immutable after construction.
class SLabeledGraph {
 public:
  SLabeledGraph() = default;

  const Alphabet& alphabet() const { return alphabet_; }
  int n() const { return n_; }
  int k() const { return alphabet_.size(); }

  const std::vector<int>& perm(int letter) const { return perms_.at(letter); }
  const std::vector<int>& inverse_perm(int letter) const {
    return inv_.at(letter);
  }
  const std::vector<std::vector<int>>& perms() const { return perms_; }

  int apply(int v, int letter, int sign) const {
    return sign >= 0 ? perms_[letter][v] : inv_[letter][v];
  }

  friend bool operator==(const SLabeledGraph& a, const SLabeledGraph& b) {
    return a.n_ == b.n_ && a.alphabet_ == b.alphabet_ && a.perms_ == b.perms_;
  }

  friend SLabeledGraph build_graph(int n, Alphabet alphabet,
                                   std::vector<std::vector<int>> perms);

 private:
  int n_ = 0;
  Alphabet alphabet_;
  std::vector<std::vector<int>> perms_;
  std::vector<std::vector<int>> inv_;
};

/// Validates the per-letter arrays and assembles the action.
inline SLabeledGraph build_graph(int n, Alphabet alphabet,
                                 std::vector<std::vector<int>> perms) {
  if (n < 0) throw ValidationError("negative vertex count");
  if (static_cast<int>(perms.size()) != alphabet.size())
    throw LengthMismatchError("one permutation required per letter");
  SLabeledGraph g;
  g.n_ = n;
  g.alphabet_ = std::move(alphabet);
  g.inv_.assign(perms.size(), std::vector<int>(n, -1));
  for (int s = 0; s < static_cast<int>(perms.size()); ++s) {
    if (static_cast<int>(perms[s].size()) != n)
      throw LengthMismatchError("permutation for letter '" +
                                g.alphabet_.name(s) + "' has length " +
                                std::to_string(perms[s].size()) +
                                ", expected " + std::to_string(n));
    for (int x = 0; x < n; ++x) {
      int y = perms[s][x];
      if (y < 0 || y >= n)
        throw OutOfRangeError("image out of range for letter '" +
                              g.alphabet_.name(s) + "'");
      if (g.inv_[s][y] != -1) throw NonBijectionError(g.alphabet_.name(s), y);
      g.inv_[s][y] = x;
    }
  }
  g.perms_ = std::move(perms);
  return g;
}

/// Right action of a word: image of v under the composite permutation.
inline int apply_word(const SLabeledGraph& g, int v, const Word& w) {
  if (v < 0 || v >= g.n()) throw OutOfRangeError("vertex out of range");
  for (const Gen& gen : w.gens()) {
    if (gen.letter < 0 || gen.letter >= g.k())
      throw OutOfRangeError("word letter out of range");
    v = g.apply(v, gen.letter, gen.sign);
  }
  return v;
}

/// Evaluates a word as a full permutation of the vertex set.
inline std::vector<int> word_permutation(const SLabeledGraph& g,
                                         const Word& w) {
  std::vector<int> p(g.n());
  std::iota(p.begin(), p.end(), 0);
  for (const Gen& gen : w.gens()) {
    if (gen.letter < 0 || gen.letter >= g.k())
      throw OutOfRangeError("word letter out of range");
    const std::vector<int>& step = gen.sign >= 0 ? g.perm(gen.letter)
                                                 : g.inverse_perm(gen.letter);
    for (int v = 0; v < g.n(); ++v) p[v] = step[p[v]];
  }
  return p;
}

/// Forgets directions and labels: one undirected edge per directed labeled
/// edge (x, x.s), so the view is 2k-regular everywhere (loops counting 2).
/// A fixed point of a letter becomes a loop; a 2-cycle a parallel pair.
inline Multigraph undirected_view(const SLabeledGraph& g) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(g.n()) * g.k());
  for (int s = 0; s < g.k(); ++s)
    for (int x = 0; x < g.n(); ++x) {
      int y = g.perm(s)[x];
      edges.emplace_back(std::min(x, y), std::max(x, y));
    }
  return Multigraph(g.n(), std::move(edges));
}

/// Merges mutually inverse directed edges into one undirected edge:
/// multiplicity of {x,y} is max(#arcs x->y, #arcs y->x), loops get
/// ceil(#fixed letters / 2). Exact inverse of edge_label_decomposition;
/// a single-letter transposition yields {x,y} once here.
inline Multigraph paired_view(const SLabeledGraph& g) {
  std::map<std::pair<int, int>, int> forward;  // (u,v) with u<v -> arc count
  std::vector<int> loops(g.n(), 0);
  std::map<std::pair<int, int>, int> backward;
  for (int s = 0; s < g.k(); ++s)
    for (int x = 0; x < g.n(); ++x) {
      int y = g.perm(s)[x];
      if (x == y)
        ++loops[x];
      else if (x < y)
        ++forward[{x, y}];
      else
        ++backward[{y, x}];
    }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [uv, cnt] : forward) {
    int rev = 0;
    if (auto it = backward.find(uv); it != backward.end()) rev = it->second;
    for (int i = 0; i < std::max(cnt, rev); ++i) edges.push_back(uv);
  }
  for (const auto& [uv, cnt] : backward) {
    if (forward.count(uv)) continue;  // already handled
    for (int i = 0; i < cnt; ++i) edges.push_back(uv);
  }
  for (int x = 0; x < g.n(); ++x)
    for (int i = 0; i < (loops[x] + 1) / 2; ++i) edges.emplace_back(x, x);
  return Multigraph(g.n(), std::move(edges));
}

struct GraphStats {
  std::optional<int> girth;  // nullopt = no cycle (forest)
  std::vector<int> component;
  int component_count = 0;
  std::vector<int> degrees;
  bool regular = false;
};

namespace detail {

struct AdjacencyList {
  // Per vertex: (neighbor, edge id). Loops appear once with u==v.
  std::vector<std::vector<std::pair<int, int>>> adj;

  explicit AdjacencyList(const Multigraph& m) : adj(m.n) {
    for (int e = 0; e < static_cast<int>(m.edges.size()); ++e) {
      auto [u, v] = m.edges[e];
      adj[u].emplace_back(v, e);
      if (u != v) adj[v].emplace_back(u, e);
    }
  }
};

inline std::pair<std::vector<int>, int> components_of(const Multigraph& m) {
  AdjacencyList lists(m);
  std::vector<int> comp(m.n, -1);
  int count = 0;
  for (int start = 0; start < m.n; ++start) {
    if (comp[start] != -1) continue;
    std::queue<int> q;
    q.push(start);
    comp[start] = count;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (auto [w, e] : lists.adj[v])
        if (comp[w] == -1) {
          comp[w] = count;
          q.push(w);
        }
    }
    ++count;
  }
  return {std::move(comp), count};
}

/// Girth of a loop-free, parallel-free multigraph via truncated BFS from
/// every root; prunes at half the current best cycle length.
inline std::optional<int> simple_girth(const Multigraph& m) {
  AdjacencyList lists(m);
  int best = -1;  // -1 = none found
  std::vector<int> dist(m.n), parent_edge(m.n);
  for (int root = 0; root < m.n; ++root) {
    std::fill(dist.begin(), dist.end(), -1);
    std::queue<int> q;
    dist[root] = 0;
    parent_edge[root] = -1;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      if (best != -1 && 2 * dist[v] + 1 >= best) continue;
      for (auto [w, e] : lists.adj[v]) {
        if (e == parent_edge[v]) continue;
        if (dist[w] == -1) {
          dist[w] = dist[v] + 1;
          parent_edge[w] = e;
          q.push(w);
        } else {
          int cand = dist[v] + dist[w] + 1;
          if (best == -1 || cand < best) best = cand;
        }
      }
    }
    if (best == 3) break;  // cannot improve on a triangle
  }
  if (best == -1) return std::nullopt;
  return best;
}

}  // namespace detail

/// Girth conventions: loop => 1, parallel pair => 2, forest => infinite.
inline std::optional<int> girth(const Multigraph& m) {
  for (auto [u, v] : m.edges)
    if (u == v) return 1;
  for (std::size_t i = 1; i < m.edges.size(); ++i)
    if (m.edges[i] == m.edges[i - 1]) return 2;
  return detail::simple_girth(m);
}

inline GraphStats graph_stats(const Multigraph& m) {
  GraphStats st;
  st.girth = girth(m);
  auto [comp, count] = detail::components_of(m);
  st.component = std::move(comp);
  st.component_count = count;
  st.degrees = m.degrees();
  st.regular = true;
  for (int d : st.degrees)
    if (d != st.degrees[0]) st.regular = false;
  return st;
}

inline bool is_connected(const Multigraph& m) {
  if (m.n == 0) return true;
  return detail::components_of(m).second == 1;
}

/// Turns a k-regular multigraph (loops counting 2) into an S-labeled graph on
/// an alphabet of size k whose paired_view reproduces the edge multiset:
/// the adjacency matrix (loops = 2 on the diagonal) is split into k
/// permutation matrices by k successive perfect matchings of the bipartite
/// double.
inline SLabeledGraph edge_label_decomposition(const Multigraph& m, int k) {
  const int n = m.n;
  if (k < 1) throw ValidationError("degree must be positive");
  std::vector<std::vector<int>> a(n, std::vector<int>(n, 0));
  for (auto [u, v] : m.edges) {
    if (u == v) {
      a[u][u] += 2;
    } else {
      a[u][v] += 1;
      a[v][u] += 1;
    }
  }
  for (int u = 0; u < n; ++u) {
    int row = std::accumulate(a[u].begin(), a[u].end(), 0);
    if (row != k)
      throw NotRegularError("vertex " + std::to_string(u) + " has degree " +
                            std::to_string(row) + ", expected " +
                            std::to_string(k));
  }

  std::vector<std::vector<int>> perms;
  std::vector<int> match(n), seen(n);
  int stamp = 0;
  // Kuhn's augmenting paths on the support of the remaining matrix.
  auto augment = [&](auto&& self, int u) -> bool {
    for (int v = 0; v < n; ++v) {
      if (a[u][v] <= 0 || seen[v] == stamp) continue;
      seen[v] = stamp;
      if (match[v] == -1 || self(self, match[v])) {
        match[v] = u;
        return true;
      }
    }
    return false;
  };
  for (int round = 0; round < k; ++round) {
    std::fill(match.begin(), match.end(), -1);
    std::fill(seen.begin(), seen.end(), -1);
    stamp = -1;
    for (int u = 0; u < n; ++u) {
      ++stamp;
      if (!augment(augment, u))
        throw MatchingFailureError(
            "no perfect matching in regular bipartite double");  // internal
    }
    std::vector<int> perm(n);
    for (int v = 0; v < n; ++v) {
      perm[match[v]] = v;
      a[match[v]][v] -= 1;
    }
    perms.push_back(std::move(perm));
  }
  std::vector<std::string> names;
  names.reserve(k);
  for (int i = 1; i <= k; ++i) names.push_back("s" + std::to_string(i));
  return build_graph(n, Alphabet(std::move(names)), std::move(perms));
}

/// Normalized edit distance between two actions on the same vertex set and
/// alphabet: |directed labeled edge sets' symmetric difference| / n.
inline Rational edit_distance(const SLabeledGraph& g, const SLabeledGraph& h) {
  if (g.n() != h.n() || !(g.alphabet() == h.alphabet()))
    throw ShapeMismatchError("edit distance needs equal vertex sets and alphabets");
  if (g.n() == 0) return Rational(0);
  std::int64_t diff = 0;
  for (int s = 0; s < g.k(); ++s)
    for (int x = 0; x < g.n(); ++x)
      if (g.perm(s)[x] != h.perm(s)[x]) diff += 2;  // one arc from each side
  return Rational(diff, g.n());
}

}  // namespace schreier
