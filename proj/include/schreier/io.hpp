#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "schreier/errors.hpp"
#include "schreier/labeled_graph.hpp"
#include "schreier/rational.hpp"
#include "schreier/spectral.hpp"

namespace schreier {

using json = nlohmann::json;

/// Canonical text form: compact JSON with sorted keys plus one newline.
/// write(read(f)) is byte-identical for canonical f.
inline std::string canonical_dump(const json& j) { return j.dump() + "\n"; }

/// "4" or "-2.5" or full-precision decimal; integers keep one decimal place
/// so CSV columns read as floats.
inline std::string format_double(double x) {
  char buf[64];
  if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 1e15) {
    std::snprintf(buf, sizeof(buf), "%.1f", x);
  } else {
    std::snprintf(buf, sizeof(buf), "%.12g", x);
  }
  return buf;
}

inline json labeled_graph_to_json(const SLabeledGraph& g,
                                  std::optional<int> basepoint = std::nullopt) {
  json perms = json::object();
  for (int s = 0; s < g.k(); ++s) perms[g.alphabet().name(s)] = g.perm(s);
  json out;
  out["n"] = g.n();
  out["letters"] = g.alphabet().names();
  out["perms"] = std::move(perms);
  if (basepoint) out["basepoint"] = *basepoint;
  return out;
}

struct LoadedGraph {
  SLabeledGraph graph;
  std::optional<int> basepoint;
};

inline LoadedGraph labeled_graph_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      if (key != "n" && key != "letters" && key != "perms" &&
          key != "basepoint")
        throw ParseError("unknown key '" + key + "'");
    }
    int n = j.at("n").get<int>();
    std::vector<std::string> letters =
        j.at("letters").get<std::vector<std::string>>();
    const json& perms_json = j.at("perms");
    std::vector<std::vector<int>> perms;
    for (const std::string& name : letters) {
      if (!perms_json.contains(name))
        throw ParseError("missing permutation for letter '" + name + "'");
      perms.push_back(perms_json.at(name).get<std::vector<int>>());
    }
    if (perms_json.size() != letters.size())
      throw ParseError("perms lists letters not in the alphabet");
    LoadedGraph out{build_graph(n, Alphabet(std::move(letters)),
                                std::move(perms)),
                    std::nullopt};
    if (j.contains("basepoint")) {
      int bp = j.at("basepoint").get<int>();
      if (bp < 0 || bp >= out.graph.n())
        throw ParseError("basepoint out of range");
      out.basepoint = bp;
    }
    return out;
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph file: ") + e.what());
  }
}

inline json multigraph_to_json(const Multigraph& m) {
  json edges = json::array();
  for (auto [u, v] : m.edges) edges.push_back(json::array({u, v}));
  json out;
  out["n"] = m.n;
  out["edges"] = std::move(edges);
  return out;
}

inline Multigraph multigraph_from_json(const json& j) {
  try {
    if (!j.is_object()) throw ParseError("top level must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
      if (it.key() != "n" && it.key() != "edges")
        throw ParseError("unknown key '" + it.key() + "'");
    int n = j.at("n").get<int>();
    std::vector<std::pair<int, int>> edges;
    for (const json& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2)
        throw ParseError("edges must be [u, v] pairs");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    return Multigraph(n, std::move(edges));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed multigraph file: ") + e.what());
  }
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ParseError("invalid JSON in '" + path.string() + "': " + e.what());
  }
  return j;
}

/// Atomic write: temp file in the same directory, then rename.
inline void write_text_atomic(const std::filesystem::path& path,
                              const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

inline LoadedGraph read_labeled_graph(const std::filesystem::path& path) {
  return labeled_graph_from_json(read_json_file(path));
}

inline void write_labeled_graph(const std::filesystem::path& path,
                                const SLabeledGraph& g,
                                std::optional<int> basepoint = std::nullopt) {
  write_text_atomic(path, canonical_dump(labeled_graph_to_json(g, basepoint)));
}

/// Reads either file flavor and views labeled graphs when a multigraph is
/// needed ("perms" => labeled graph, "edges" => multigraph).
inline Multigraph read_multigraph_any(const std::filesystem::path& path) {
  json j = read_json_file(path);
  if (j.is_object() && j.contains("perms"))
    return undirected_view(labeled_graph_from_json(j).graph);
  return multigraph_from_json(j);
}

// --- report serialization ---------------------------------------------------

inline json to_json(const Rational& r) {
  return json{{"num", r.numerator()}, {"den", r.denominator()},
              {"value", to_double(r)}};
}

inline json to_json(const SpectrumReport& rep) {
  return json{{"eigenvalues", rep.eigenvalues},
              {"lambda0", rep.lambda0},
              {"lambda1", rep.lambda1},
              {"lambdaMinus", rep.lambda_minus},
              {"gap", rep.gap}};
}

inline json to_json(const ExpansionReport& rep) {
  return json{{"kind", rep.kind == ExpansionReport::Kind::EdgeCheeger
                           ? "edge-cheeger"
                           : "set-expansion"},
              {"value", to_json(rep.value)},
              {"witness", rep.witness}};
}

inline json to_json(const BipartitenessReport& rep) {
  return json{{"psi", to_json(rep.psi)},
              {"psiWitness", rep.psi_witness},
              {"psiCutSide", rep.psi_cut_side},
              {"eS", rep.e_s},
              {"kS", rep.k_s},
              {"c", to_json(rep.c)},
              {"cWitness", rep.c_witness},
              {"r", to_json(rep.r)},
              {"rCutSide", rep.r_cut_side}};
}

}  // namespace schreier
