#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <numeric>
#include <string>
#include <vector>

#include "schreier/errors.hpp"
#include "schreier/labeled_graph.hpp"

namespace schreier {
namespace fixtures {

/// One vertex with k loops (the free group acting on a point).
inline SLabeledGraph bouquet(int k) {
  std::vector<std::string> names;
  for (int i = 0; i < k; ++i) names.push_back(std::string(1, 'a' + i % 26) +
                                              (i >= 26 ? std::to_string(i) : ""));
  std::vector<std::vector<int>> perms(k, std::vector<int>{0});
  return build_graph(1, Alphabet(std::move(names)), std::move(perms));
}

/// Z/m with one letter acting by +1 (the labeled m-cycle).
inline SLabeledGraph cycle_action(int m, const std::string& letter = "a") {
  std::vector<int> perm(m);
  for (int i = 0; i < m; ++i) perm[i] = (i + 1) % m;
  return build_graph(m, Alphabet({letter}), {perm});
}

/// Cayley graph of Z/m with one letter per listed step.
inline SLabeledGraph cyclic_cayley(int m, const std::vector<int>& steps) {
  std::vector<std::string> names;
  std::vector<std::vector<int>> perms;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    names.push_back("x" + std::to_string(i + 1));
    std::vector<int> perm(m);
    for (int v = 0; v < m; ++v) perm[v] = ((v + steps[i]) % m + m) % m;
    perms.push_back(std::move(perm));
  }
  return build_graph(m, Alphabet(std::move(names)), std::move(perms));
}

/// Right-regular action of the dihedral group of order 2m, letters r and s.
/// Element r^a s^f is indexed a + m*f.
inline SLabeledGraph dihedral_regular(int m) {
  if (m < 1) throw ValidationError("dihedral order parameter must be positive");
  const int n = 2 * m;
  std::vector<int> by_r(n), by_s(n);
  for (int a = 0; a < m; ++a) {
    by_r[a] = (a + 1) % m;              // r^a . r
    by_r[m + a] = m + (a - 1 + m) % m;  // r^a s . r = r^(a-1) s
    by_s[a] = m + a;                    // r^a . s
    by_s[m + a] = a;                    // r^a s . s = r^a
  }
  return build_graph(n, Alphabet({"r", "s"}), {by_r, by_s});
}

namespace detail {

/// Regular action from explicit group elements (as permutations of a small
/// ground set, closed under the generators) given generator indices.
inline SLabeledGraph regular_from_elements(
    std::vector<std::vector<int>> elements,
    const std::vector<std::vector<int>>& generators,
    const std::vector<std::string>& names) {
  std::sort(elements.begin(), elements.end());
  auto index_of = [&](const std::vector<int>& p) {
    auto it = std::lower_bound(elements.begin(), elements.end(), p);
    if (it == elements.end() || *it != p)
      throw ValidationError("element set not closed under generators");
    return static_cast<int>(it - elements.begin());
  };
  auto compose = [](const std::vector<int>& x, const std::vector<int>& g) {
    std::vector<int> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = g[x[i]];
    return out;
  };
  std::vector<std::vector<int>> perms;
  for (const auto& g : generators) {
    std::vector<int> perm(elements.size());
    for (std::size_t i = 0; i < elements.size(); ++i)
      perm[i] = index_of(compose(elements[i], g));
    perms.push_back(std::move(perm));
  }
  return build_graph(static_cast<int>(elements.size()), Alphabet(names),
                     std::move(perms));
}

inline std::vector<std::vector<int>> permutations_with_parity(int n,
                                                              int parity) {
  std::vector<int> base(n);
  std::iota(base.begin(), base.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (base[i] > base[j]) ++inversions;
    if (parity < 0 || inversions % 2 == parity) out.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  return out;
}

}  // namespace detail

/// Right-regular action of S3, generators (0 1) and (0 1 2).
inline SLabeledGraph s3_regular() {
  return detail::regular_from_elements(
      detail::permutations_with_parity(3, -1),
      {{1, 0, 2}, {1, 2, 0}}, {"u", "v"});
}

/// Right-regular action of A4, generators (0 1 2) and (0 1)(2 3).
inline SLabeledGraph a4_regular() {
  return detail::regular_from_elements(
      detail::permutations_with_parity(4, 0),
      {{1, 2, 0, 3}, {1, 0, 3, 2}}, {"u", "v"});
}

/// Right-regular action of Z/m with the +1 generator.
inline SLabeledGraph cyclic_regular(int m) { return cycle_action(m, "x"); }

inline Multigraph cycle_multigraph(int m) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i) edges.emplace_back(i, (i + 1) % m);
  return Multigraph(m, std::move(edges));
}

inline Multigraph complete_multigraph(int m) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) edges.emplace_back(i, j);
  return Multigraph(m, std::move(edges));
}

/// CLI-facing lookup: bouquetK, cycleM (alias cM), zM (Cayley of Z/M, one
/// letter), dM (dihedral of order 2M), s3, a4.
inline SLabeledGraph named_graph(const std::string& name) {
  auto starts = [&](const std::string& prefix) {
    return name.rfind(prefix, 0) == 0;
  };
  auto tail_int = [&](std::size_t prefix_len) {
    return std::stoi(name.substr(prefix_len));
  };
  if (starts("bouquet")) return bouquet(tail_int(7));
  if (starts("cycle")) return cycle_action(tail_int(5));
  if (name == "s3") return s3_regular();
  if (name == "a4") return a4_regular();
  if (starts("c") && name.size() > 1 && std::isdigit(name[1]))
    return cycle_action(tail_int(1));
  if (starts("z")) return cycle_action(tail_int(1));
  if (starts("d")) return dihedral_regular(tail_int(1));
  throw ValidationError("unknown graph name '" + name + "'");
}

}  // namespace fixtures
}  // namespace schreier
