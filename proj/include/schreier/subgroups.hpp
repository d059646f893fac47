#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/labeled_graph.hpp"
#include "schreier/rational.hpp"
#include "schreier/word.hpp"

namespace schreier {

/// Finite-index subgroup of a free group, represented as a pointed transitive
/// action: the subgroup is Stab(basepoint), its index the vertex count.
struct SubgroupRep {
  SLabeledGraph action;
  int basepoint = 0;

  int index() const { return action.n(); }
};

/// Per coset-vertex, a word carrying the basepoint to that vertex;
/// reps[basepoint] is the empty word.
struct Transversal {
  std::vector<Word> reps;
};

/// Subgroup generator words over the ambient alphabet; stored with inverse
/// pairs merged to one canonical representative each.
struct GeneratorSet {
  std::vector<Word> words;

  /// Symmetric expansion: every stored word and its inverse, deduplicated.
  std::vector<Word> symmetric_words() const {
    std::set<Word> out(words.begin(), words.end());
    for (const Word& w : words) out.insert(w.inverse());
    return {out.begin(), out.end()};
  }
};

namespace detail {

inline void require_transitive(const SLabeledGraph& g, int basepoint) {
  if (g.n() == 0) throw NotTransitiveError("empty vertex set");
  if (basepoint < 0 || basepoint >= g.n())
    throw OutOfRangeError("basepoint out of range");
  std::vector<char> seen(g.n(), 0);
  std::queue<int> q;
  seen[basepoint] = 1;
  q.push(basepoint);
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int s = 0; s < g.k(); ++s)
      for (int sign : {+1, -1}) {
        int w = g.apply(v, s, sign);
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          q.push(w);
        }
      }
  }
  if (count != g.n()) throw NotTransitiveError("action is not transitive");
}

}  // namespace detail

inline SubgroupRep make_subgroup_rep(SLabeledGraph action, int basepoint = 0) {
  detail::require_transitive(action, basepoint);
  return SubgroupRep{std::move(action), basepoint};
}

/// Reidemeister-Schreier machinery for a transitive action: a BFS transversal
/// (shortest words, ties broken by letter index with + before -) and the
/// Nielsen-Schreier generators N(S,C) = { c s p_{c,s}^-1 }, with words that
/// freely reduce to the identity dropped and inverse pairs merged.
inline std::pair<Transversal, GeneratorSet> schreier_machinery(
    const SLabeledGraph& g, int basepoint = 0) {
  detail::require_transitive(g, basepoint);
  Transversal trans;
  trans.reps.assign(g.n(), Word());
  std::vector<char> seen(g.n(), 0);
  std::queue<int> q;
  seen[basepoint] = 1;
  q.push(basepoint);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int s = 0; s < g.k(); ++s)
      for (int sign : {+1, -1}) {
        int w = g.apply(v, s, sign);
        if (!seen[w]) {
          seen[w] = 1;
          trans.reps[w] = trans.reps[v] * Word::letter(s, sign);
          q.push(w);
        }
      }
  }

  std::set<Word> gens;
  for (int v = 0; v < g.n(); ++v)
    for (int s = 0; s < g.k(); ++s)
      for (int sign : {+1, -1}) {
        int target = g.apply(v, s, sign);
        Word w = trans.reps[v] * Word::letter(s, sign) *
                 trans.reps[target].inverse();
        if (w.empty()) continue;
        gens.insert(w.inverse_canonical());
      }
  GeneratorSet out;
  out.words.assign(gens.begin(), gens.end());
  return {std::move(trans), std::move(out)};
}

/// Restricts the action of g to the subgroup generated by T: the result has
/// one letter per stored T-word, acting on the orbit of v0. Every T-word must
/// stabilize sub's basepoint. When g = Sch(Gamma/Gamma', S), this is the
/// Schreier graph Sch(H / H cap Gamma', T).
inline SLabeledGraph restrict_to_subgroup(const SLabeledGraph& g,
                                          const SubgroupRep& sub,
                                          const GeneratorSet& t, int v0) {
  if (!(g.alphabet() == sub.action.alphabet()))
    throw AlphabetMismatchError("graph and subgroup alphabets differ");
  if (v0 < 0 || v0 >= g.n()) throw OutOfRangeError("orbit seed out of range");
  for (const Word& w : t.words)
    if (apply_word(sub.action, sub.basepoint, w) != sub.basepoint)
      throw WordNotInSubgroupError("a generator word moves the basepoint");

  // Orbit closure of v0 under the words and their inverses.
  std::vector<char> seen(g.n(), 0);
  std::vector<int> orbit;
  std::queue<int> q;
  seen[v0] = 1;
  q.push(v0);
  orbit.push_back(v0);
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (const Word& w : t.words)
      for (const Word& step : {w, w.inverse()}) {
        int img = apply_word(g, v, step);
        if (!seen[img]) {
          seen[img] = 1;
          orbit.push_back(img);
          q.push(img);
        }
      }
  }
  std::sort(orbit.begin(), orbit.end());
  std::vector<int> pos(g.n(), -1);
  for (std::size_t i = 0; i < orbit.size(); ++i)
    pos[orbit[i]] = static_cast<int>(i);

  std::vector<std::string> names;
  names.reserve(t.words.size());
  for (std::size_t i = 1; i <= t.words.size(); ++i)
    names.push_back("t" + std::to_string(i));
  std::vector<std::vector<int>> perms;
  perms.reserve(t.words.size());
  for (const Word& w : t.words) {
    std::vector<int> p(orbit.size());
    for (std::size_t i = 0; i < orbit.size(); ++i)
      p[i] = pos[apply_word(g, orbit[i], w)];
    perms.push_back(std::move(p));
  }
  return build_graph(static_cast<int>(orbit.size()), Alphabet(std::move(names)),
                     std::move(perms));
}

/// Realizes H cap K as the action on the orbit of the basepoint pair inside
/// the product action; the result's index is the orbit size.
inline SubgroupRep intersect_actions(const SubgroupRep& a,
                                     const SubgroupRep& b) {
  if (!(a.action.alphabet() == b.action.alphabet()))
    throw AlphabetMismatchError("intersection needs a shared alphabet");
  const int nb = b.action.n();
  auto encode = [nb](int x, int y) { return static_cast<std::int64_t>(x) * nb + y; };

  std::map<std::int64_t, int> discovered;  // pair code -> discovery marker
  std::vector<std::pair<int, int>> orbit;
  std::queue<std::pair<int, int>> q;
  std::pair<int, int> start{a.basepoint, b.basepoint};
  discovered[encode(start.first, start.second)] = 1;
  q.push(start);
  orbit.push_back(start);
  while (!q.empty()) {
    auto [x, y] = q.front();
    q.pop();
    for (int s = 0; s < a.action.k(); ++s)
      for (int sign : {+1, -1}) {
        std::pair<int, int> img{a.action.apply(x, s, sign),
                                b.action.apply(y, s, sign)};
        if (discovered.emplace(encode(img.first, img.second), 1).second) {
          orbit.push_back(img);
          q.push(img);
        }
      }
  }
  std::sort(orbit.begin(), orbit.end());
  std::map<std::int64_t, int> pos;
  for (std::size_t i = 0; i < orbit.size(); ++i)
    pos[encode(orbit[i].first, orbit[i].second)] = static_cast<int>(i);

  std::vector<std::vector<int>> perms(a.action.k(),
                                      std::vector<int>(orbit.size()));
  for (int s = 0; s < a.action.k(); ++s)
    for (std::size_t i = 0; i < orbit.size(); ++i) {
      auto [x, y] = orbit[i];
      perms[s][i] = pos.at(encode(a.action.perm(s)[x], b.action.perm(s)[y]));
    }
  SLabeledGraph action = build_graph(static_cast<int>(orbit.size()),
                                     a.action.alphabet(), std::move(perms));
  int bp = pos.at(encode(a.basepoint, b.basepoint));
  return SubgroupRep{std::move(action), bp};
}

/// All elements of a finite group presented by its right-regular action, as
/// permutations x -> x * g, indexed by the image of 0 (element i maps 0 to i).
/// The action is regular iff it is transitive and the group the letters
/// generate has order exactly n; anything else is rejected.
inline std::vector<std::vector<int>> regular_action_elements(
    const SLabeledGraph& g) {
  detail::require_transitive(g, 0);
  const int n = g.n();
  std::vector<int> identity(n);
  for (int v = 0; v < n; ++v) identity[v] = v;
  std::set<std::vector<int>> seen{identity};
  std::vector<std::vector<int>> closure{identity};
  for (std::size_t i = 0; i < closure.size(); ++i) {
    std::vector<int> cur = closure[i];
    for (int s = 0; s < g.k(); ++s) {
      std::vector<int> next(n);
      for (int v = 0; v < n; ++v) next[v] = g.perm(s)[cur[v]];
      if (seen.insert(next).second) {
        if (static_cast<int>(seen.size()) > n)
          throw ValidationError(
              "action is not regular (group order exceeds vertex count)");
        closure.push_back(std::move(next));
      }
    }
  }
  std::vector<std::vector<int>> elements(n);
  std::vector<char> filled(n, 0);
  for (auto& tau : closure) {
    int v = tau[0];
    if (filled[v])
      throw ValidationError("action is not regular (elements collide)");
    filled[v] = 1;
    elements[v] = std::move(tau);
  }
  for (char f : filled)
    if (!f) throw ValidationError("action is not regular");
  return elements;
}

struct AveragingReport {
  Rational mean;     // E_g mu(Ag cap B), exact
  Rational product;  // mu(A) mu(B)
  bool pass = false;
};

/// Finite averaging identity: the mean over group elements g of
/// mu(Ag cap B) equals mu(A) mu(B) exactly.
inline AveragingReport averaging_identity_check(const SLabeledGraph& regular,
                                                const std::vector<int>& a,
                                                const std::vector<int>& b) {
  const int n = regular.n();
  if (n > 20) throw SizeGuardError("averaging guard: |G| > 20");
  std::uint32_t a_mask = 0, b_mask = 0;
  for (int v : a) {
    if (v < 0 || v >= n) throw OutOfRangeError("subset element out of range");
    a_mask |= 1u << v;
  }
  for (int v : b) {
    if (v < 0 || v >= n) throw OutOfRangeError("subset element out of range");
    b_mask |= 1u << v;
  }
  auto elements = regular_action_elements(regular);
  std::int64_t total = 0;
  for (const auto& tau : elements) {
    std::uint32_t ag = 0;
    std::uint32_t rest = a_mask;
    while (rest) {
      int v = __builtin_ctz(rest);
      rest &= rest - 1;
      ag |= 1u << tau[v];
    }
    total += __builtin_popcount(ag & b_mask);
  }
  AveragingReport rep;
  rep.mean = Rational(total, static_cast<std::int64_t>(n) * n);
  rep.product = Rational(__builtin_popcount(a_mask), n) *
                Rational(__builtin_popcount(b_mask), n);
  rep.pass = rep.mean == rep.product;
  return rep;
}

}  // namespace schreier
