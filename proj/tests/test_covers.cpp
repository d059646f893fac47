#include "schreier/covers.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "schreier/fixtures.hpp"
#include "schreier/prng.hpp"

using namespace schreier;

namespace {

TEST(RandomCover, DegreeOneIsIdentity) {
  SLabeledGraph base = fixtures::cycle_action(5);
  CoveringMap cover = random_cover(base, 1, 42);
  EXPECT_TRUE(cover.total == base);
  for (int v = 0; v < 5; ++v) EXPECT_EQ(cover.proj[v], v);
}

TEST(RandomCover, ForcedTableOnBouquet) {
  SLabeledGraph base = fixtures::bouquet(2);
  CoverSpec spec;
  spec.d = 3;
  spec.table = {{{0, 1, 2}}, {{1, 2, 0}}};  // a = id, b = 3-cycle
  CoveringMap cover = apply_cover(base, spec);
  EXPECT_EQ(cover.total.perm(0), std::vector<int>({0, 1, 2}));
  EXPECT_EQ(cover.total.perm(1), std::vector<int>({1, 2, 0}));
}

TEST(RandomCover, AlwaysVerifies) {
  SplitMix64 rng(314159);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(8));
    int k = 1 + static_cast<int>(rng.next_below(3));
    int d = 1 + static_cast<int>(rng.next_below(6));
    SLabeledGraph base = oracles::random_labeled_graph(n, k, rng.next());
    CoveringMap cover = random_cover(base, d, rng.next());
    EXPECT_EQ(verify_covering(cover.total, cover.base, cover.proj),
              Rational(0));
    EXPECT_EQ(cover.total.n(), n * d);
  }
}

TEST(RandomCover, SameSeedSameCover) {
  SLabeledGraph base = fixtures::cycle_action(4);
  CoveringMap a = random_cover(base, 5, 987654321);
  CoveringMap b = random_cover(base, 5, 987654321);
  EXPECT_TRUE(a.total == b.total);
  CoveringMap c = random_cover(base, 5, 987654322);
  EXPECT_FALSE(c.total == a.total);  // overwhelmingly likely for 5 sheets
}

TEST(VerifyCovering, CountsDefectiveVertices) {
  SLabeledGraph base = fixtures::cycle_action(4);
  CoveringMap cover = random_cover(base, 2, 7);
  // Swap the letter images of two total vertices over different base
  // vertices; both become defective.
  auto perms = cover.total.perms();
  std::swap(perms[0][0], perms[0][2]);
  SLabeledGraph corrupted =
      build_graph(cover.total.n(), cover.total.alphabet(), perms);
  EXPECT_EQ(verify_covering(corrupted, base, cover.proj), Rational(2, 8));
}

TEST(VerifyCovering, RejectsNonSurjectiveProjection) {
  SLabeledGraph base = fixtures::cycle_action(2);
  SLabeledGraph total = fixtures::cycle_action(2);
  EXPECT_THROW(verify_covering(total, base, {0, 0}), NotSurjectiveError);
}

TEST(IteratedCover, TwoByTwoOnBouquet) {
  Tower tower = iterated_random_cover(fixtures::bouquet(2), {2, 2}, 99);
  ASSERT_EQ(tower.levels.size(), 3u);
  EXPECT_EQ(tower.top().n(), 4);
  for (const CoveringMap& map : tower.maps)
    EXPECT_EQ(verify_covering(map.total, map.base, map.proj), Rational(0));
}

TEST(IteratedCover, VertexCountMultiplies) {
  SLabeledGraph base = fixtures::cycle_action(3);
  Tower tower = iterated_random_cover(base, {2, 3, 2}, 5);
  EXPECT_EQ(tower.top().n(), 3 * 2 * 3 * 2);
}

TEST(IteratedCover, RejectsBadSchedule) {
  EXPECT_THROW(iterated_random_cover(fixtures::bouquet(1), {}, 0),
               ValidationError);
  EXPECT_THROW(iterated_random_cover(fixtures::bouquet(1), {1}, 0),
               ValidationError);
}

TEST(NewEigenvalues, BouquetTwoLift) {
  SLabeledGraph base = fixtures::bouquet(2);
  CoverSpec spec;
  spec.d = 2;
  spec.table = {{{0, 1}}, {{1, 0}}};  // a = id, b = swap
  CoveringMap cover = apply_cover(base, spec);
  auto [old_vals, new_vals] = new_eigenvalues(cover);
  ASSERT_EQ(old_vals.size(), 1u);
  ASSERT_EQ(new_vals.size(), 1u);
  EXPECT_NEAR(old_vals[0], 4.0, 1e-9);
  EXPECT_NEAR(new_vals[0], 0.0, 1e-9);
}

TEST(NewEigenvalues, DegreeOneHasNoNewEigenvalues) {
  CoveringMap cover = random_cover(fixtures::cycle_action(5), 1, 3);
  auto [old_vals, new_vals] = new_eigenvalues(cover);
  EXPECT_EQ(old_vals.size(), 5u);
  EXPECT_TRUE(new_vals.empty());
}

TEST(NewEigenvalues, OldSpectrumEmbeds) {
  SplitMix64 rng(161803);
  for (int trial = 0; trial < 100; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(12));
    int k = 1 + static_cast<int>(rng.next_below(2));
    int d = 2 + static_cast<int>(rng.next_below(3));
    SLabeledGraph base = oracles::random_labeled_graph(n, k, rng.next());
    CoveringMap cover = random_cover(base, d, rng.next());
    auto [old_vals, new_vals] = new_eigenvalues(cover);
    EXPECT_EQ(old_vals.size(), static_cast<std::size_t>(n));
    EXPECT_EQ(new_vals.size(), static_cast<std::size_t>(n * d - n));
  }
}

TEST(EditDistance, LiftInvariance) {
  SplitMix64 rng(271828);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(6));
    int k = 1 + static_cast<int>(rng.next_below(2));
    int d = 2 + static_cast<int>(rng.next_below(4));
    SLabeledGraph g = oracles::random_labeled_graph(n, k, rng.next());
    SLabeledGraph h = oracles::random_labeled_graph(n, k, rng.next());
    CoverSpec spec = CoverSpec::random(g, d, rng.next());
    CoveringMap cg = apply_cover(g, spec);
    CoveringMap ch = apply_cover(h, spec);
    EXPECT_EQ(edit_distance(cg.total, ch.total), edit_distance(g, h));
  }
}

TEST(Covers, GirthNeverDecreases) {
  SplitMix64 rng(42424242);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(rng.next_below(8));
    int k = 1 + static_cast<int>(rng.next_below(2));
    SLabeledGraph base = oracles::random_labeled_graph(n, k, rng.next());
    CoveringMap cover =
        random_cover(base, 2 + static_cast<int>(rng.next_below(3)), rng.next());
    auto gb = girth(undirected_view(base));
    auto gt = girth(undirected_view(cover.total));
    ASSERT_TRUE(gb.has_value());  // 2k-regular views always have cycles
    if (gt) EXPECT_GE(*gt, *gb);
  }
}

TEST(Glue, TwoTriangleCoversMakeAHexagon) {
  SLabeledGraph base = fixtures::bouquet(1);
  CoverSpec spec;
  spec.d = 3;
  spec.table = {{{1, 2, 0}}};
  CoveringMap p1 = apply_cover(base, spec);
  CoveringMap p2 = apply_cover(base, spec);
  CoveringMap glued = glue(p1, p2, 0, 0, 0);
  EXPECT_EQ(glued.total.n(), 6);
  auto g = girth(undirected_view(glued.total));
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(*g, 6);
  EXPECT_EQ(glue_cut_crossings(glued, 3), 2);
  EXPECT_EQ(verify_covering(glued.total, glued.base, glued.proj), Rational(0));
  // Exact Cheeger confirms the witness bound 2/3.
  ExpansionReport ch = edge_cheeger_exact(undirected_view(glued.total));
  EXPECT_LE(ch.value, Rational(2, 3));
}

TEST(Glue, TwoCyclesMakeOneLongCycle) {
  SLabeledGraph base = fixtures::bouquet(1);
  CoverSpec s1, s2;
  s1.d = 5;
  s1.table = {{{1, 2, 3, 4, 0}}};
  s2.d = 7;
  s2.table = {{{1, 2, 3, 4, 5, 6, 0}}};
  CoveringMap glued =
      glue(apply_cover(base, s1), apply_cover(base, s2), 0, 0, 0);
  auto g = girth(undirected_view(glued.total));
  ASSERT_TRUE(g.has_value());
  EXPECT_EQ(*g, 12);
  EXPECT_EQ(graph_stats(undirected_view(glued.total)).component_count, 1);
}

TEST(Glue, RequiresGirthAboveTwo) {
  SLabeledGraph base = fixtures::bouquet(1);
  CoverSpec spec;
  spec.d = 2;
  spec.table = {{{1, 0}}};  // 2-cycle: girth 2
  CoveringMap p = apply_cover(base, spec);
  EXPECT_THROW(glue(p, p, 0, 0, 0), GirthTooSmallError);
}

TEST(Glue, RequiresAlignedFibers) {
  SLabeledGraph base = fixtures::cycle_action(3);
  CoverSpec spec;
  spec.d = 3;
  spec.table = {{{1, 2, 0}, {0, 1, 2}, {0, 1, 2}}};
  CoveringMap p1 = apply_cover(base, spec);
  CoveringMap p2 = apply_cover(base, spec);
  // Vertices 0 and 1 sit over different base vertices.
  EXPECT_THROW(glue(p1, p2, 0, 0, 3), FiberMismatchError);
}

TEST(Glue, RequiresSameBase) {
  CoveringMap p1 = random_cover(fixtures::cycle_action(3), 3, 1);
  CoveringMap p2 = random_cover(fixtures::cycle_action(4), 3, 1);
  EXPECT_THROW(glue(p1, p2, 0, 0, 0), BaseMismatchError);
}

TEST(GirthBoost, BouquetWithOneLoop) {
  GirthBoostResult result = girth_boosting_cover(fixtures::bouquet(1), 11, 50);
  auto base_girth = girth(undirected_view(fixtures::bouquet(1)));
  auto top_girth = girth(undirected_view(result.tower.top()));
  ASSERT_TRUE(base_girth && top_girth);
  EXPECT_GT(*top_girth, *base_girth);
}

TEST(GirthBoost, TwentySeedSweepOnLabeledTriangle) {
  SLabeledGraph base = fixtures::cyclic_cayley(3, {1, 2});
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GirthBoostResult result = girth_boosting_cover(base, seed, 50);
    EXPECT_LE(result.tries, 50);
    auto top_girth = girth(undirected_view(result.tower.top()));
    ASSERT_TRUE(top_girth.has_value());
    EXPECT_GT(*top_girth, *girth(undirected_view(base)));
  }
}

TEST(GirthBoost, ExhaustsRetries) {
  // max_tries = 1 with a seed whose depth-1 2-cover keeps a fixed point.
  SLabeledGraph base = fixtures::bouquet(1);
  bool found_failing_seed = false;
  for (std::uint64_t seed = 0; seed < 64 && !found_failing_seed; ++seed) {
    try {
      girth_boosting_cover(base, seed, 1);
    } catch (const RetriesExhaustedError&) {
      found_failing_seed = true;
    }
  }
  EXPECT_TRUE(found_failing_seed);
}

TEST(Covers, BipartiteEditRatioNeverIncreases) {
  SplitMix64 rng(555);
  int done = 0;
  for (std::uint64_t trial = 0; done < 40; ++trial) {
    int n = 2 + static_cast<int>(rng.next_below(4));
    int k = 1 + static_cast<int>(rng.next_below(2));
    int d = 2 + static_cast<int>(rng.next_below(2));
    if (n * d > 18) continue;
    SLabeledGraph base = oracles::random_labeled_graph(n, k, rng.next());
    CoveringMap cover = random_cover(base, d, rng.next());
    Multigraph mb = undirected_view(base);
    Multigraph mt = undirected_view(cover.total);
    ++done;
    // r * n = |E| - maxcut; loops are never cut, so they always count.
    Rational rb(static_cast<std::int64_t>(mb.edges.size()) -
                    oracles::naive_maxcut(mb),
                mb.n);
    Rational rt(static_cast<std::int64_t>(mt.edges.size()) -
                    oracles::naive_maxcut(mt),
                mt.n);
    EXPECT_LE(rt, rb);
  }
}

}  // namespace
