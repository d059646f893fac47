#include "schreier/constructions.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "schreier/fixtures.hpp"

using namespace schreier;

namespace {

TEST(Sl2p, OrderAndTransitivity) {
  SLabeledGraph g5 = sl2p_graph(5);
  EXPECT_EQ(g5.n(), 120);
  EXPECT_TRUE(is_connected(undirected_view(g5)));
  SLabeledGraph g7 = sl2p_graph(7);
  EXPECT_EQ(g7.n(), 336);
}

TEST(Sl2p, RejectsNonPrimesAndSmallPrimes) {
  EXPECT_THROW(sl2p_graph(6), NotPrimeError);
  EXPECT_THROW(sl2p_graph(3), NotPrimeError);
}

TEST(Sl2p, VisibleSpectralGapAtFive) {
  SLabeledGraph g = sl2p_graph(5);
  SpectrumReport rep = spectrum(undirected_view(g));
  EXPECT_NEAR(rep.lambda0, 4.0, 1e-9);
  EXPECT_LT(rep.lambda1, 3.9);
}

TEST(Rossztau, WitnessCutOnToyBase) {
  SLabeledGraph base = fixtures::cyclic_cayley(3, {1, 2});
  RossztauResult r = rossztau_build(base);
  EXPECT_EQ(r.g_graph.n(), 6);
  EXPECT_EQ(r.crossing_edges, 4);
  EXPECT_EQ(r.ch_bound, Rational(4, 3));
  EXPECT_EQ(r.witness, (std::vector<int>{0, 1, 2}));
}

TEST(Rossztau, PaperGeneratingSet) {
  SLabeledGraph base = fixtures::cyclic_cayley(5, {1, 2});
  RossztauResult r = rossztau_build(base);
  ASSERT_EQ(r.t_words.words.size(), 7u);
  // x1 and t x1 t^-1 act identically, likewise x2; t^2 is the identity.
  const Alphabet& ab = r.g_graph.alphabet();
  Word x1 = Word::letter(ab.index_of("x1"));
  Word x2 = Word::letter(ab.index_of("x2"));
  Word t = Word::letter(ab.index_of("t"));
  EXPECT_EQ(word_permutation(r.g_graph, x1),
            word_permutation(r.g_graph, t * x1 * t.inverse()));
  EXPECT_EQ(word_permutation(r.g_graph, x2),
            word_permutation(r.g_graph, t * x2 * t.inverse()));
  std::vector<int> identity(r.g_graph.n());
  for (int v = 0; v < r.g_graph.n(); ++v) identity[v] = v;
  EXPECT_EQ(word_permutation(r.g_graph, t * t), identity);
}

TEST(Rossztau, RestrictionReproducesTGraph) {
  SLabeledGraph base = fixtures::cyclic_cayley(4, {1, 2});
  RossztauResult r = rossztau_build(base);
  // Gamma_n H = Gamma, so H acts transitively: the orbit restriction on any
  // seed is the whole vertex set and matches the T-graph permutation data.
  SLabeledGraph restricted =
      restrict_to_subgroup(r.g_graph, r.h, r.t_words, 1);
  EXPECT_EQ(restricted.n(), r.g_graph.n());
  EXPECT_EQ(restricted.perms(), r.t_graph.perms());
}

TEST(Rossztau, RejectsTinyBase) {
  EXPECT_THROW(rossztau_build(fixtures::cyclic_cayley(2, {1, 1})),
               TooSmallError);
}

TEST(Lubtau, SingleMemberEqualsRossztauBound) {
  RossztauResult r = rossztau_build(fixtures::cyclic_cayley(5, {1, 2}));
  LubtauReport rep =
      lubtau_chain_report({lubtau_member(r)}, r.t_words, 1000000);
  ASSERT_EQ(rep.levels.size(), 1u);
  EXPECT_EQ(rep.levels[0].bound, r.ch_bound);
  EXPECT_EQ(rep.levels[0].index, 10);
  EXPECT_FALSE(rep.truncated);
}

TEST(Lubtau, BoundsShrinkWithTheLargerMember) {
  RossztauResult r5 = rossztau_build(fixtures::cyclic_cayley(5, {1, 2}));
  RossztauResult r7 = rossztau_build(fixtures::cyclic_cayley(7, {1, 3}));
  LubtauReport rep = lubtau_chain_report(
      {lubtau_member(r5), lubtau_member(r7)}, r5.t_words, 1000000);
  ASSERT_EQ(rep.levels.size(), 2u);
  EXPECT_EQ(rep.levels[0].bound, Rational(4, 5));
  EXPECT_EQ(rep.levels[1].bound, Rational(4, 7));
  EXPECT_LE(rep.levels[1].bound, rep.levels[0].bound);
  EXPECT_FALSE(rep.truncated);
}

TEST(Lubtau, CapTruncatesChain) {
  RossztauResult r5 = rossztau_build(fixtures::cyclic_cayley(5, {1, 2}));
  RossztauResult r7 = rossztau_build(fixtures::cyclic_cayley(7, {1, 3}));
  LubtauReport rep = lubtau_chain_report(
      {lubtau_member(r5), lubtau_member(r7)}, r5.t_words, 20);
  EXPECT_TRUE(rep.truncated);
  EXPECT_EQ(rep.levels.size(), 1u);
}

TEST(Nagytetel, Z6IndexTwo) {
  SLabeledGraph cayley = fixtures::cycle_action(6);
  SubgroupRep sub = make_subgroup_rep(
      build_graph(2, Alphabet({"a"}), {{1, 0}}), 0);
  NagytetelReport rep = nagytetel_audit(cayley, sub);
  EXPECT_EQ(rep.k, 2);
  EXPECT_EQ(rep.h_base, Rational(2, 3));
  EXPECT_EQ(rep.h_orbit, Rational(2));
  EXPECT_EQ(rep.orbit, (std::vector<int>{0, 2, 4}));
  // k = 2: 8 k^(3 - log2 3) = 8 * 8/3 = 64/3, bound = (3/64)(1/6) = 1/128.
  EXPECT_NEAR(rep.bound, 1.0 / 128.0, 1e-12);
  EXPECT_TRUE(rep.pass);
}

TEST(Nagytetel, IndexOneIsImmediate) {
  SLabeledGraph cayley = fixtures::cycle_action(6);
  SubgroupRep sub = make_subgroup_rep(fixtures::bouquet(1), 0);
  NagytetelReport rep = nagytetel_audit(cayley, sub);
  EXPECT_EQ(rep.k, 1);
  EXPECT_EQ(rep.h_orbit, rep.h_base);
  EXPECT_TRUE(rep.pass);
}

TEST(Nagytetel, CyclicSweep) {
  for (int m = 3; m <= 16; ++m) {
    for (int k : {2, 3}) {
      SLabeledGraph cayley = fixtures::cycle_action(m);
      std::vector<int> shift(k);
      for (int i = 0; i < k; ++i) shift[i] = (i + 1) % k;
      SubgroupRep sub =
          make_subgroup_rep(build_graph(k, Alphabet({"a"}), {shift}), 0);
      NagytetelReport rep = nagytetel_audit(cayley, sub);
      EXPECT_TRUE(rep.pass) << "m=" << m << " k=" << k;
    }
  }
}

TEST(GlueTower, ZeroLevelsReturnsTheStart) {
  SLabeledGraph g1 = build_graph(4, Alphabet({"a", "b"}),
                                 {{1, 2, 3, 0}, {1, 0, 3, 2}});
  TowerConfig config;
  config.levels = 0;
  GlueTowerResult result = gluelemma_tower(g1, config);
  ASSERT_EQ(result.g_tower.levels.size(), 1u);
  ASSERT_EQ(result.k_tower.levels.size(), 1u);
  EXPECT_TRUE(result.g_tower.levels[0] == g1);
  EXPECT_TRUE(result.k_tower.levels[0] == g1);
  ASSERT_EQ(result.report.size(), 1u);
  EXPECT_EQ(result.report[0].edit_dist, Rational(0));
  EXPECT_EQ(result.report[0].largest_fraction, Rational(1));
}

TEST(GlueTower, OneLevelContracts) {
  SLabeledGraph g1 = build_graph(4, Alphabet({"a", "b"}),
                                 {{1, 2, 3, 0}, {1, 0, 3, 2}});
  TowerConfig config;
  config.levels = 1;
  config.seed = 2024;
  GlueTowerResult result = gluelemma_tower(g1, config);
  ASSERT_EQ(result.report.size(), 2u);
  const GlueTowerLevel& lv = result.report[1];
  EXPECT_GT(lv.girth_g, result.report[0].girth_g);
  EXPECT_GT(lv.girth_k, result.report[0].girth_k);
  EXPECT_LT(lv.edit_dist, Rational(2));  // delta/50 with delta = 100
  ASSERT_TRUE(lv.ch_upper.has_value());
  EXPECT_GT(lv.largest_fraction, Rational(3, 4));
  for (const CoveringMap& map : result.g_tower.maps)
    EXPECT_EQ(verify_covering(map.total, map.base, map.proj), Rational(0));
  for (const CoveringMap& map : result.k_tower.maps)
    EXPECT_EQ(verify_covering(map.total, map.base, map.proj), Rational(0));
}

TEST(TowerConfig, DefaultCeilingMatchesDegreeFourWindow) {
  // d = 4: sqrt(2 d sqrt(d-1)) = sqrt(8 sqrt 3) ~ 3.7224, b ~ 3.8608.
  double b = TowerConfig::default_b(4);
  EXPECT_NEAR(b, 4.0 - (4.0 - std::sqrt(8.0 * std::sqrt(3.0))) / 2.0, 1e-12);
  EXPECT_GT(b, 2.0 * std::sqrt(3.0));
  EXPECT_LT(b, 4.0);
}

TEST(TowerConfig, Validation) {
  TowerConfig config;
  config.delta = Rational(0);
  EXPECT_THROW(config.validate(4), ValidationError);
  config.delta = Rational(100);
  config.first_schedule = {1};
  EXPECT_THROW(config.validate(4), ValidationError);
}

}  // namespace
