#include "schreier/labeled_graph.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "schreier/fixtures.hpp"
#include "schreier/prng.hpp"

using namespace schreier;

namespace {

SLabeledGraph four_cycle() { return fixtures::cycle_action(4); }

std::map<std::pair<int, int>, int> edge_multiset(const Multigraph& m) {
  std::map<std::pair<int, int>, int> out;
  for (auto e : m.edges) ++out[e];
  return out;
}

TEST(BuildGraph, SingleVertexLoop) {
  SLabeledGraph g = build_graph(1, Alphabet({"a"}), {{0}});
  EXPECT_EQ(g.n(), 1);
  EXPECT_EQ(g.perm(0), std::vector<int>({0}));
}

TEST(BuildGraph, FourCycle) {
  SLabeledGraph g = four_cycle();
  EXPECT_EQ(g.perm(0), std::vector<int>({1, 2, 3, 0}));
  EXPECT_EQ(g.inverse_perm(0), std::vector<int>({3, 0, 1, 2}));
}

TEST(BuildGraph, RejectsNonBijection) {
  EXPECT_THROW(build_graph(2, Alphabet({"a"}), {{0, 0}}), NonBijectionError);
}

TEST(BuildGraph, RejectsLengthMismatch) {
  EXPECT_THROW(build_graph(3, Alphabet({"a"}), {{0, 1}}), LengthMismatchError);
  EXPECT_THROW(build_graph(2, Alphabet({"a", "b"}), {{1, 0}}),
               LengthMismatchError);
}

TEST(ApplyWord, FourCycleSquare) {
  SLabeledGraph g = four_cycle();
  Word aa = Word::letter(0) * Word::letter(0);
  EXPECT_EQ(apply_word(g, 0, aa), 2);
}

TEST(ApplyWord, EmptyWordIsIdentity) {
  SLabeledGraph g = four_cycle();
  for (int v = 0; v < 4; ++v) EXPECT_EQ(apply_word(g, v, Word()), v);
}

TEST(ApplyWord, InverseLetter) {
  SLabeledGraph g = four_cycle();
  EXPECT_EQ(apply_word(g, 0, Word::letter(0, -1)), 3);
}

TEST(ApplyWord, HomomorphismProperty) {
  SplitMix64 rng(20240811);
  for (int trial = 0; trial < 50; ++trial) {
    SLabeledGraph g = oracles::random_labeled_graph(
        2 + static_cast<int>(rng.next_below(10)), 1 + rng.next_below(3),
        rng.next());
    Word w1 = oracles::random_word(g.k(), 6, rng);
    Word w2 = oracles::random_word(g.k(), 6, rng);
    int v = static_cast<int>(rng.next_below(g.n()));
    EXPECT_EQ(apply_word(g, v, w1 * w2), apply_word(g, apply_word(g, v, w1), w2));
  }
}

TEST(UndirectedView, BouquetHasTwoLoopsDegreeFour) {
  Multigraph m = undirected_view(fixtures::bouquet(2));
  EXPECT_EQ(m.edges, (std::vector<std::pair<int, int>>{{0, 0}, {0, 0}}));
  EXPECT_EQ(m.degrees(), std::vector<int>({4}));
}

TEST(UndirectedView, FourCycleIsC4) {
  Multigraph m = undirected_view(four_cycle());
  EXPECT_EQ(edge_multiset(m),
            (std::map<std::pair<int, int>, int>{
                {{0, 1}, 1}, {{1, 2}, 1}, {{2, 3}, 1}, {{0, 3}, 1}}));
  EXPECT_EQ(m.degrees(), std::vector<int>(4, 2));
}

TEST(UndirectedView, TranspositionGivesParallelPair) {
  SLabeledGraph g = build_graph(2, Alphabet({"a"}), {{1, 0}});
  Multigraph m = undirected_view(g);
  EXPECT_EQ(edge_multiset(m),
            (std::map<std::pair<int, int>, int>{{{0, 1}, 2}}));
  // The paired view merges the two mutually inverse arcs instead.
  Multigraph p = paired_view(g);
  EXPECT_EQ(edge_multiset(p),
            (std::map<std::pair<int, int>, int>{{{0, 1}, 1}}));
}

TEST(UndirectedView, AlwaysTwoKRegular) {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(12));
    int k = 1 + static_cast<int>(rng.next_below(3));
    SLabeledGraph g = oracles::random_labeled_graph(n, k, rng.next());
    Multigraph m = undirected_view(g);
    // Handshake: 2|E| counts loops twice through degrees.
    std::int64_t degree_sum = 0;
    for (int d : m.degrees()) {
      EXPECT_EQ(d, 2 * k);
      degree_sum += d;
    }
    EXPECT_EQ(degree_sum, 2 * static_cast<std::int64_t>(m.edges.size()));
  }
}

TEST(GraphStats, C4) {
  GraphStats st = graph_stats(undirected_view(four_cycle()));
  ASSERT_TRUE(st.girth.has_value());
  EXPECT_EQ(*st.girth, 4);
  EXPECT_EQ(st.component_count, 1);
  EXPECT_TRUE(st.regular);
  EXPECT_EQ(st.degrees[0], 2);
}

TEST(GraphStats, LoopConvention) {
  GraphStats st = graph_stats(undirected_view(fixtures::bouquet(2)));
  ASSERT_TRUE(st.girth.has_value());
  EXPECT_EQ(*st.girth, 1);
}

TEST(GraphStats, ParallelPairConvention) {
  Multigraph m(2, {{0, 1}, {0, 1}});
  ASSERT_TRUE(girth(m).has_value());
  EXPECT_EQ(*girth(m), 2);
}

TEST(GraphStats, ForestHasInfiniteGirth) {
  Multigraph path(3, {{0, 1}, {1, 2}});
  EXPECT_FALSE(girth(path).has_value());
}

TEST(GraphStats, TwoDisjointTriangles) {
  std::vector<int> perm{1, 2, 0, 4, 5, 3};
  SLabeledGraph g = build_graph(6, Alphabet({"a"}), {perm});
  GraphStats st = graph_stats(undirected_view(g));
  ASSERT_TRUE(st.girth.has_value());
  EXPECT_EQ(*st.girth, 3);
  EXPECT_EQ(st.component_count, 2);
}

TEST(GraphStats, GirthMatchesOracle) {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(9));
    SLabeledGraph g =
        oracles::random_labeled_graph(n, 1 + rng.next_below(2), rng.next());
    Multigraph m = undirected_view(g);
    EXPECT_EQ(girth(m), oracles::naive_girth(m)) << "n=" << n;
  }
}

TEST(Decomposition, C4RoundTrip) {
  Multigraph c4 = fixtures::cycle_multigraph(4);
  SLabeledGraph g = edge_label_decomposition(c4, 2);
  EXPECT_EQ(g.k(), 2);
  EXPECT_EQ(edge_multiset(paired_view(g)), edge_multiset(c4));
}

TEST(Decomposition, SingleLoopRoundTrip) {
  Multigraph loop(1, {{0, 0}});
  SLabeledGraph g = edge_label_decomposition(loop, 2);
  EXPECT_EQ(g.k(), 2);
  EXPECT_EQ(edge_multiset(paired_view(g)), edge_multiset(loop));
}

TEST(Decomposition, K4RoundTrip) {
  Multigraph k4 = fixtures::complete_multigraph(4);
  SLabeledGraph g = edge_label_decomposition(k4, 3);
  EXPECT_EQ(g.k(), 3);
  EXPECT_EQ(edge_multiset(paired_view(g)), edge_multiset(k4));
}

TEST(Decomposition, RejectsIrregular) {
  Multigraph path(3, {{0, 1}, {1, 2}});
  EXPECT_THROW(edge_label_decomposition(path, 2), NotRegularError);
}

TEST(Decomposition, RandomFourRegularRoundTrips) {
  SplitMix64 rng(424242);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng.next_below(38));
    Multigraph m = oracles::random_4regular_loopless(n, rng.next(), false);
    SLabeledGraph g = edge_label_decomposition(m, 4);
    EXPECT_EQ(edge_multiset(paired_view(g)), edge_multiset(m)) << "n=" << n;
  }
}

TEST(EditDistance, IdenticalGraphsAreAtZero) {
  SLabeledGraph g = four_cycle();
  EXPECT_EQ(edit_distance(g, g), Rational(0));
}

TEST(EditDistance, ThreeCycleVsIdentity) {
  SLabeledGraph cyc = fixtures::cycle_action(3);
  SLabeledGraph id = build_graph(3, Alphabet({"a"}), {{0, 1, 2}});
  EXPECT_EQ(edit_distance(cyc, id), Rational(2));
}

TEST(EditDistance, RejectsShapeMismatch) {
  EXPECT_THROW(
      edit_distance(fixtures::cycle_action(3), fixtures::cycle_action(4)),
      ShapeMismatchError);
}

TEST(EditDistance, IsAMetric) {
  SplitMix64 rng(31337);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(8));
    int k = 1 + static_cast<int>(rng.next_below(2));
    SLabeledGraph a = oracles::random_labeled_graph(n, k, rng.next());
    SLabeledGraph b = oracles::random_labeled_graph(n, k, rng.next());
    SLabeledGraph c = oracles::random_labeled_graph(n, k, rng.next());
    EXPECT_EQ(edit_distance(a, a), Rational(0));
    EXPECT_EQ(edit_distance(a, b), edit_distance(b, a));
    EXPECT_LE(edit_distance(a, c), edit_distance(a, b) + edit_distance(b, c));
    if (edit_distance(a, b) == Rational(0)) EXPECT_TRUE(a == b);
  }
}

}  // namespace
