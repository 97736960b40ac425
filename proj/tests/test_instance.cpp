#include <gtest/gtest.h>

#include <numeric>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wtap/instance.hpp"

using namespace wtap;
using fixture::q;

namespace {

WtapInstance abc(std::vector<Link> links) { return WtapInstance::create(3, {{0, 1}, {1, 2}}, std::move(links)); }

std::set<EdgeId> as_set(const std::vector<EdgeId>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(TreePath, PathGraph) {
  auto inst = abc({{0, 2, 1, {}}});
  EXPECT_EQ(as_set(tree_path(inst, inst.link(0))), (std::set<EdgeId>{0, 1}));
}

TEST(TreePath, SelfLoopIsEmpty) {
  auto inst = abc({{1, 1, 1, {}}});
  EXPECT_TRUE(tree_path(inst, inst.link(0)).empty());
}

TEST(TreePath, UnknownEndpointRejected) {
  auto inst = abc({});
  EXPECT_THROW(tree_path(inst, 0, 7), std::invalid_argument);
}

TEST(TreePath, MatchesBfsOnRandomTrees) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = fixture::random_instance(10, seed);
    for (LinkId l = 0; l < inst.link_count(); ++l) {
      const Link& k = inst.link(l);
      std::set<int> expect = oracle::bfs_path(inst, k.u, k.v);
      auto got = tree_path(inst, k);
      EXPECT_EQ(std::set<int>(got.begin(), got.end()), expect) << "seed " << seed << " link " << l;
    }
  }
}

TEST(CoverSet, SmallCases) {
  auto inst = abc({{0, 1, 1, {}}, {1, 2, 1, {}}, {0, 2, 1, {}}});
  EXPECT_EQ(cover_set(inst, std::vector<EdgeId>{0}), (std::vector<LinkId>{0, 2}));
  EXPECT_TRUE(cover_set(inst, std::vector<EdgeId>{}).empty());
}

TEST(CoverSet, MatchesPerLinkScan) {
  std::mt19937_64 rng(7);
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = fixture::random_instance(12, seed);
    std::vector<EdgeId> f;
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
      if (rng() % 3 == 0) f.push_back(e);
    }
    std::vector<LinkId> expect;
    for (LinkId l = 0; l < inst.link_count(); ++l) {
      auto p = oracle::bfs_path(inst, inst.link(l).u, inst.link(l).v);
      if (std::any_of(f.begin(), f.end(), [&](EdgeId e) { return p.count(e) > 0; })) expect.push_back(l);
    }
    EXPECT_EQ(cover_set(inst, f), expect);
  }
}

TEST(CoverSet, EdgeOnPathIffLinkCoversEdge) {
  auto inst = fixture::random_instance(14, 3);
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    auto p = as_set(tree_path(inst, inst.link(l)));
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
      auto cov = cover_set(inst, std::vector<EdgeId>{e});
      EXPECT_EQ(p.count(e) == 1, std::find(cov.begin(), cov.end(), l) != cov.end());
    }
  }
}

TEST(Feasibility, SmallCases) {
  auto inst = abc({{0, 2, 1, {}}});
  EXPECT_TRUE(is_feasible(inst, std::vector<LinkId>{0}));
  EXPECT_FALSE(is_feasible(inst, std::vector<LinkId>{}));
}

TEST(Feasibility, AgreesWithBridgeFinding) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    int n = 2 + static_cast<int>(seed % 49);
    auto inst = fixture::random_instance(n, seed);
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<LinkId> chosen;
      for (LinkId l = 0; l < inst.link_count(); ++l) {
        if (rng() % 2) chosen.push_back(l);
      }
      EXPECT_EQ(is_feasible(inst, chosen), !oracle::has_bridge(inst, chosen)) << "n " << n << " seed " << seed;
    }
  }
}

TEST(Classify, StarCrossAndUp) {
  auto inst = WtapInstance::create(3, {{0, 1}, {0, 2}}, {{1, 2, 1, {}}, {0, 1, 1, {}}}, 0);
  EXPECT_EQ(classify_link(inst, 0), LinkClass::Cross);
  EXPECT_EQ(classify_link(inst, 1), LinkClass::Up);
}

TEST(Classify, UnrootedIsStateError) {
  auto inst = abc({{0, 2, 1, {}}});
  EXPECT_THROW(classify_link(inst, 0), StateError);
}

TEST(Classify, MatchesNaiveLca) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    auto base = fixture::random_instance(15, seed);
    NodeId r = static_cast<NodeId>(seed % 15);
    auto inst = with_root(base, r);
    int counts[3] = {0, 0, 0};
    for (LinkId l = 0; l < inst.link_count(); ++l) {
      const Link& k = inst.link(l);
      int w = oracle::naive_lca(inst, r, k.u, k.v);
      LinkClass expect = (w == k.u || w == k.v) ? LinkClass::Up : (w == r ? LinkClass::Cross : LinkClass::InNotUp);
      LinkClass got = classify_link(inst, l);
      EXPECT_EQ(got, expect);
      ++counts[static_cast<int>(got)];
    }
    EXPECT_EQ(counts[0] + counts[1] + counts[2], inst.link_count());
  }
}

TEST(SplitSolution, RecombinesExactly) {
  std::mt19937_64 rng(5);
  auto inst = with_root(fixture::random_instance(12, 9), 4);
  auto x = fixture::random_covering_point(inst, rng);
  auto parts = split_solution(inst, x);
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    EXPECT_EQ(parts.in[l] + parts.cross[l], x[l]);
    if (classify_link(inst, l) == LinkClass::Cross) {
      EXPECT_EQ(parts.in[l], 0);
    } else {
      EXPECT_EQ(parts.cross[l], 0);
    }
  }
}

TEST(SplitSolution, AllUpOrAllCross) {
  auto up = WtapInstance::create(3, {{0, 1}, {1, 2}}, {{0, 2, 1, {}}, {1, 2, 1, {}}}, 0);
  FractionalSolution x(std::vector<Rational>{q(1, 2), q(3)});
  EXPECT_EQ(split_solution(up, x).in.values, x.values);
  auto star = fixture::star3(0);
  FractionalSolution y(std::vector<Rational>{q(1, 2), q(1, 2), q(1, 2)});
  EXPECT_EQ(cost_of(star, split_solution(star, y).in), 0);
  EXPECT_THROW(split_solution(abc({}), FractionalSolution(0)), StateError);
}

TEST(ShadowComplete, PathLinkGetsShadowsAtSameCost) {
  auto inst = shadow_complete(abc({{0, 2, 5, {}}}));
  ASSERT_EQ(inst.link_count(), 3);
  for (const auto& l : inst.links()) {
    EXPECT_EQ(l.cost, 5);
    EXPECT_EQ(l.origin, 0);
  }
}

TEST(ShadowComplete, AlreadyCompleteKeepsLinksAndLowersCosts) {
  auto inst = shadow_complete(abc({{0, 1, 7, {}}, {1, 2, 1, {}}, {0, 2, 2, {}}}));
  ASSERT_EQ(inst.link_count(), 3);
  EXPECT_EQ(inst.link(*cheapest_link_between(inst, 0, 1)).cost, 2);
  EXPECT_EQ(inst.link(*cheapest_link_between(inst, 1, 2)).cost, 1);
}

TEST(ShadowComplete, EveryPairOnEveryPathHasACheaperLink) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto base = fixture::random_instance(10, seed);
    auto inst = shadow_complete(base);
    for (const auto& l : base.links()) {
      auto nodes = base.path_nodes(l.u, l.v);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
          auto s = cheapest_link_between(inst, nodes[i], nodes[j]);
          ASSERT_TRUE(s.has_value());
          EXPECT_LE(inst.link(*s).cost, l.cost);
          // the recorded origin really contains the shadow
          const Link& o = base.link(*inst.link(*s).origin);
          auto op = oracle::bfs_path(base, o.u, o.v);
          for (int e : oracle::bfs_path(base, nodes[i], nodes[j])) EXPECT_EQ(op.count(e), 1u);
        }
      }
    }
  }
}

TEST(Contract, EmptyIsIdentity) {
  auto inst = fixture::random_instance(8, 2);
  auto c = contract(inst, std::vector<EdgeId>{});
  EXPECT_EQ(c.instance.node_count(), 8);
  for (NodeId v = 0; v < 8; ++v) EXPECT_EQ(c.node_map[v], v);
}

TEST(Contract, EverythingLeavesSelfLoops) {
  auto inst = fixture::random_instance(8, 2);
  std::vector<EdgeId> all(inst.edge_count());
  std::iota(all.begin(), all.end(), 0);
  auto c = contract(inst, all);
  EXPECT_EQ(c.instance.node_count(), 1);
  EXPECT_EQ(c.instance.link_count(), inst.link_count());
  for (const auto& l : c.instance.links()) EXPECT_TRUE(l.is_self_loop());
}

TEST(Contract, LinkPathDropsEdgesAndPathsCommute) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = fixture::random_instance(12, seed);
    auto p = tree_path(inst, inst.link(0));
    auto c = contract(inst, p);
    EXPECT_EQ(c.instance.edge_count(), inst.edge_count() - static_cast<int>(p.size()));
    EXPECT_EQ(c.instance.node_count(), c.instance.edge_count() + 1);
    std::set<EdgeId> contracted(p.begin(), p.end());
    for (LinkId l = 0; l < inst.link_count(); ++l) {
      std::set<EdgeId> expect;
      for (EdgeId e : tree_path(inst, inst.link(l))) {
        if (!contracted.count(e)) expect.insert(e);
      }
      std::set<EdgeId> got;
      for (EdgeId e : tree_path(c.instance, c.instance.link(l))) got.insert(c.instance.lineage().edge_source[e]);
      EXPECT_EQ(got, expect);
    }
  }
}

TEST(Normalize, ScalesToUnitMinimum) {
  auto inst = abc({{0, 1, 2, {}}, {1, 2, 4, {}}});
  auto n = normalize_costs(inst);
  EXPECT_EQ(n.instance.link(0).cost, 1);
  EXPECT_EQ(n.instance.link(1).cost, 2);
  EXPECT_EQ(n.scale, q(1, 2));
  EXPECT_EQ(n.instance.cost_bound(), 2);
}

TEST(Normalize, EqualCostsBecomeOne) {
  auto n = normalize_costs(abc({{0, 1, q(7, 3), {}}, {1, 2, q(7, 3), {}}}));
  for (const auto& l : n.instance.links()) EXPECT_EQ(l.cost, 1);
}

TEST(Normalize, RationalCostsHaveUnitMinimum) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = fixture::random_instance(9, seed, Family::RandomTree, CostModel::Rational);
    auto n = normalize_costs(inst);
    Rational lo = n.instance.link(0).cost;
    for (const auto& l : n.instance.links()) lo = std::min(lo, l.cost);
    EXPECT_EQ(lo, 1);
  }
}

TEST(Normalize, NonPositiveCostRejected) {
  EXPECT_THROW(normalize_costs(abc({{0, 2, 0, {}}})), std::invalid_argument);
  EXPECT_THROW(normalize_costs(abc({{0, 2, -1, {}}})), std::invalid_argument);
}

TEST(Instance, RejectsNonTrees) {
  EXPECT_THROW(WtapInstance::create(3, {{0, 1}, {0, 1}}, {}), std::invalid_argument);
  EXPECT_THROW(WtapInstance::create(3, {{0, 1}}, {}), std::invalid_argument);
  EXPECT_THROW(WtapInstance::create(2, {{0, 0}}, {}), std::invalid_argument);
  EXPECT_THROW(WtapInstance::create(2, {{0, 1}}, {{0, 5, 1, {}}}), std::invalid_argument);
}

TEST(Instance, ParallelAndTreeOverlappingLinksAreDistinct) {
  auto inst = abc({{0, 1, 1, {}}, {0, 1, 2, {}}, {1, 2, 1, {}}});
  EXPECT_EQ(inst.link_count(), 3);
  EXPECT_EQ(cover_set(inst, std::vector<EdgeId>{0}), (std::vector<LinkId>{0, 1}));
}
