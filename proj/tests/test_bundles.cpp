#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wtap/bundles.hpp"

using namespace wtap;
using fixture::q;

namespace {

// OPT(B) by enumeration: cheapest link set covering exactly the edges of B.
Rational enumerate_bundle_opt(const WtapInstance& inst, const std::vector<EdgeId>& edges) {
  auto cand = cover_set(inst, edges);
  std::optional<Rational> best;
  for (unsigned mask = 0; mask < (1u << cand.size()); ++mask) {
    std::vector<LinkId> pick;
    Rational c = 0;
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (mask >> i & 1u) {
        pick.push_back(cand[i]);
        c += inst.link(cand[i]).cost;
      }
    }
    if (best && c >= *best) continue;
    std::set<int> cov;
    for (LinkId l : pick) {
      auto p = oracle::bfs_path(inst, inst.link(l).u, inst.link(l).v);
      cov.insert(p.begin(), p.end());
    }
    bool ok = true;
    for (EdgeId e : edges) ok = ok && cov.count(e);
    if (ok) best = c;
  }
  return *best;
}

}  // namespace

TEST(Bundle, EdgeSetIsPathUnion) {
  auto inst = fixture::random_instance(10, 2);
  auto b = make_bundle(inst, {{0, 5}, {3, 7}});
  std::set<int> expect = oracle::bfs_path(inst, 0, 5);
  auto p2 = oracle::bfs_path(inst, 3, 7);
  expect.insert(p2.begin(), p2.end());
  EXPECT_EQ(std::vector<EdgeId>(expect.begin(), expect.end()), b.edge_set);
}

TEST(Bundle, SingleEdgeOptIsCheapestCoveringLink) {
  auto inst = fixture::random_instance(10, 5, Family::RandomTree, CostModel::Rational, 5);
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    auto b = make_bundle(inst, {{inst.edge(e).u, inst.edge(e).v}});
    Rational cheapest = -1;
    for (LinkId l : cover_set(inst, std::vector<EdgeId>{e})) {
      if (cheapest < 0 || inst.link(l).cost < cheapest) cheapest = inst.link(l).cost;
    }
    EXPECT_EQ(bundle_opt(inst, b), cheapest);
  }
}

TEST(Bundle, WholeTreeIsOpt) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto inst = fixture::random_instance(9, seed, Family::Path);
    auto b = make_bundle(inst, {{0, 8}});
    if (inst.link_count() > 18) continue;
    EXPECT_EQ(bundle_opt(inst, b), *oracle::enumerate_opt(inst));
  }
}

TEST(Bundle, TwoPathBundlesMatchEnumeration) {
  std::mt19937_64 rng(11);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto inst = fixture::random_instance(11, seed, Family::RandomTree, CostModel::UniformInteger, 4);
    std::uniform_int_distribution<int> node(0, inst.node_count() - 1);
    int a = node(rng), b = node(rng), c = node(rng), d = node(rng);
    if (a == b || c == d) continue;
    auto bun = make_bundle(inst, {{a, b}, {c, d}});
    if (cover_set(inst, bun.edge_set).size() > 16) continue;
    EXPECT_EQ(bundle_opt(inst, bun), enumerate_bundle_opt(inst, bun.edge_set)) << "seed " << seed;
    auto sol = bundle_solve(inst, bun);
    EXPECT_EQ(sol.solution.cost, cost_of(sol.contracted, sol.solution.links));
  }
}

TEST(Bundle, RowsHoldForEveryMinimalCover) {
  auto inst = fixture::random_instance(8, 3);
  ASSERT_LE(inst.link_count(), 16);
  auto covers = oracle::minimal_covers(inst);
  ASSERT_FALSE(covers.empty());
  std::vector<Bundle> bundles{make_bundle(inst, {{0, 7}}), make_bundle(inst, {{1, 4}, {2, 6}}),
                              make_bundle(inst, {{inst.edge(0).u, inst.edge(0).v}})};
  for (const auto& b : bundles) {
    auto row = bundle_constraint(inst, b);
    for (const auto& cover : covers) {
      FractionalSolution x(inst.link_count());
      for (LinkId l : cover) x[l] = 1;
      EXPECT_LE(row.violation(x), 0);
    }
  }
}

TEST(Bundle, OptIsMonotoneInEdgeSet) {
  auto inst = fixture::random_instance(12, 8);
  auto small = make_bundle(inst, {{0, 3}});
  auto big = make_bundle(inst, {{0, 3}, {5, 9}});
  EXPECT_LE(bundle_opt(inst, small), bundle_opt(inst, big));
}

TEST(Bundle, LinearRowSkipsMissingColumns) {
  auto inst = fixture::star3();
  auto row = bundle_constraint(inst, make_bundle(inst, {{1, 2}}));
  EXPECT_EQ(row.rhs, 1);
  std::vector<int> col{0, -1, 1};
  auto lin = to_linear(row, col);
  EXPECT_EQ(lin.tag, ConstraintTag::Bundle);
  EXPECT_EQ(lin.coefficients.size(), 2u);
}

TEST(GammaBundle, SegmentsBreakAtContractedEdges) {
  auto inst = WtapInstance::create(5, fixture::path_edges(5), {{0, 4, 1, {}}});
  auto c = contract(inst, std::vector<EdgeId>{1});
  // descendant edges map back to 0, 2, 3 of the original path
  std::vector<EdgeId> all(c.instance.edge_count());
  std::iota(all.begin(), all.end(), 0);
  EXPECT_FALSE(is_gamma_bundle(inst, c.instance, all, 1).has_value());
  auto b = is_gamma_bundle(inst, c.instance, all, 2);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->paths, (std::vector<std::pair<NodeId, NodeId>>{{0, 1}, {2, 4}}));
}

TEST(GammaBundle, BranchingSplitsIntoPaths) {
  auto inst = fixture::star3();
  std::vector<EdgeId> all{0, 1, 2};
  auto b = is_gamma_bundle(inst, inst, all, 3);
  ASSERT_TRUE(b.has_value());
  EXPECT_EQ(b->paths.size(), 3u);
  EXPECT_FALSE(is_gamma_bundle(inst, inst, all, 2).has_value());
}

TEST(GammaBundle, UnrelatedInstanceRejected) {
  auto a = fixture::star3();
  auto b = WtapInstance::create(4, fixture::path_edges(4), {{0, 3, 1, {}}});
  EXPECT_THROW(is_gamma_bundle(a, b, std::vector<EdgeId>{0}, 1), InvalidArgument);
}
