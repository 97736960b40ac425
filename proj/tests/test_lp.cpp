#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wtap/lp.hpp"
#include "wtap/odd_cut.hpp"

using namespace wtap;
using fixture::q;

namespace {

LinearConstraint row(std::vector<std::pair<int, Rational>> coef, Rational rhs) {
  LinearConstraint c;
  c.coefficients = std::move(coef);
  c.rhs = std::move(rhs);
  return c;
}

// Every odd-cut inequality of the instance, as dense rows over links.
void all_odd_cut_rows(const WtapInstance& inst, std::vector<std::vector<Rational>>& A, std::vector<Rational>& b) {
  const int n = inst.node_count();
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<char> in(n);
    for (int v = 0; v < n; ++v) in[v] = mask >> v & 1u;
    if (boundary_of(inst, in).size() % 2 == 0) continue;
    auto s = make_odd_set(inst, std::span<const char>(in));
    auto c = make_constraint(inst, s);
    std::vector<Rational> r(inst.link_count(), Rational(0));
    for (auto [l, k] : c.multiplicities) r[l] = k;
    A.push_back(r);
    b.push_back(c.rhs);
  }
}

std::vector<Rational> costs(const WtapInstance& inst) {
  std::vector<Rational> c;
  for (const auto& l : inst.links()) c.push_back(l.cost);
  return c;
}

}  // namespace

TEST(SolveLp, SingleVariable) {
  LpModel m{{q(1)}, {row({{0, q(1)}}, q(1))}};
  auto out = solve_lp(m);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.solution[0], 1);
  EXPECT_EQ(out.objective, 1);
  EXPECT_TRUE(check_certificate(m, out).ok);
}

TEST(SolveLp, EmptyConstraintSet) {
  LpModel m{{q(2), q(3)}, {}};
  auto out = solve_lp(m);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.objective, 0);
  EXPECT_EQ(out.solution, (std::vector<Rational>{0, 0}));
}

TEST(SolveLp, Infeasible) {
  LpModel m{{q(1)}, {row({}, q(1))}};
  EXPECT_EQ(solve_lp(m).status, LpStatus::Infeasible);
}

TEST(SolveLp, StarCutLpMatchesVertexEnumeration) {
  auto inst = fixture::star3();
  CutLp lp = build_cut_lp(inst);
  auto out = solve_lp(lp.model);
  ASSERT_EQ(out.status, LpStatus::Optimal);
  EXPECT_EQ(out.objective, q(3, 2));
  for (const auto& v : out.solution) EXPECT_EQ(v, q(1, 2));
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    std::vector<Rational> r(3, Rational(0));
    for (LinkId l : inst.edge_cover(e)) r[l] = 1;
    A.push_back(r);
    b.push_back(1);
  }
  EXPECT_EQ(*oracle::vertex_enumeration_lp(A, b, costs(inst)), q(3, 2));
  EXPECT_TRUE(check_certificate(lp.model, out).ok);
}

TEST(SolveLp, RandomSmallModelsMatchVertexEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> coef(0, 3), cost(1, 5), rhs(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3, m = 4;
    std::vector<std::vector<Rational>> A(m, std::vector<Rational>(n));
    std::vector<Rational> b(m), c(n);
    LpModel model;
    for (int j = 0; j < n; ++j) c[j] = cost(rng);
    model.objective = c;
    for (int i = 0; i < m; ++i) {
      LinearConstraint r;
      for (int j = 0; j < n; ++j) {
        A[i][j] = coef(rng);
        if (A[i][j] != 0) r.coefficients.push_back({j, A[i][j]});
      }
      b[i] = rhs(rng);
      r.rhs = b[i];
      model.constraints.push_back(r);
    }
    auto expect = oracle::vertex_enumeration_lp(A, b, c);
    auto out = solve_lp(model);
    if (!expect) {
      EXPECT_EQ(out.status, LpStatus::Infeasible);
      continue;
    }
    ASSERT_EQ(out.status, LpStatus::Optimal);
    EXPECT_EQ(out.objective, *expect);
    auto cert = check_certificate(model, out);
    EXPECT_TRUE(cert.ok) << cert.failure;
  }
}

TEST(SolveLp, CertificateCheckRejectsTampering) {
  auto inst = fixture::star3();
  CutLp lp = build_cut_lp(inst);
  auto out = solve_lp(lp.model);
  auto bad = out;
  bad.solution[0] = 0;
  EXPECT_FALSE(check_certificate(lp.model, bad).ok);
  bad = out;
  bad.duals[0] += 1;
  EXPECT_FALSE(check_certificate(lp.model, bad).ok);
  bad = out;
  bad.objective += 1;
  EXPECT_FALSE(check_certificate(lp.model, bad).ok);
}

TEST(SolveLp, Deterministic) {
  auto inst = fixture::random_instance(12, 4);
  CutLp lp = build_cut_lp(inst);
  auto a = solve_lp(lp.model), b = solve_lp(lp.model);
  EXPECT_EQ(a.solution, b.solution);
  EXPECT_EQ(a.basis, b.basis);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
  auto ra = solve_with_separation(lp.model, oracles), rb = solve_with_separation(lp.model, oracles);
  ASSERT_EQ(ra.added.size(), rb.added.size());
  for (std::size_t i = 0; i < ra.added.size(); ++i) EXPECT_EQ(ra.added[i].label, rb.added[i].label);
}

TEST(Separation, SatisfiedOracleIsPlainSolve) {
  auto inst = fixture::random_instance(10, 1);
  CutLp lp = build_cut_lp(inst);
  std::vector<SeparationOracle> none{[](std::span<const Rational>) { return std::optional<LinearConstraint>(); }};
  auto run = solve_with_separation(lp.model, none);
  EXPECT_EQ(run.rounds, 0);
  EXPECT_EQ(run.outcome.solution, solve_lp(lp.model).solution);
}

TEST(Separation, StarRisesToTwoAsFullOddCutLp) {
  auto inst = fixture::star3();
  CutLp lp = build_cut_lp(inst);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
  auto run = solve_with_separation(lp.model, oracles);
  EXPECT_EQ(run.outcome.objective, 2);
  EXPECT_GE(run.rounds, 1);
  std::vector<std::vector<Rational>> A;
  std::vector<Rational> b;
  all_odd_cut_rows(inst, A, b);
  EXPECT_EQ(*oracle::vertex_enumeration_lp(A, b, costs(inst)), 2);
}

TEST(Separation, PathWithOneLinkNeedsNoCuts) {
  auto inst = WtapInstance::create(4, fixture::path_edges(4), {{0, 3, 2, {}}});
  CutLp lp = build_cut_lp(inst);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
  auto run = solve_with_separation(lp.model, oracles);
  EXPECT_EQ(run.rounds, 0);
  EXPECT_EQ(run.outcome.objective, 2);
}

TEST(Separation, ReturnedPointSatisfiesEveryOracle) {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    auto inst = fixture::random_instance(9, seed);
    CutLp lp = build_cut_lp(inst);
    std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
    auto run = solve_with_separation(lp.model, oracles);
    EXPECT_FALSE(oracles[0](run.outcome.solution).has_value());
    auto x = lp.to_solution(run.outcome.solution, inst.link_count());
    EXPECT_EQ(oracle::max_odd_cut_violation(inst, x.values), 0);
    LpModel full = lp.model;
    for (const auto& c : run.added) full.constraints.push_back(c);
    EXPECT_TRUE(check_certificate(full, run.outcome).ok);
  }
}

TEST(Separation, RoundLimitIsResourceError) {
  auto inst = fixture::star3();
  CutLp lp = build_cut_lp(inst);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
  EXPECT_THROW(solve_with_separation(lp.model, oracles, 0), ResourceError);
}

TEST(Ilp, IntegralLpNeedsNoBranching) {
  auto inst = WtapInstance::create(3, fixture::path_edges(3), {{0, 2, 1, {}}, {0, 1, 1, {}}});
  CutLp lp = build_cut_lp(inst);
  auto res = solve_ilp(lp.model, {});
  EXPECT_EQ(res.objective, 1);
  EXPECT_EQ(res.nodes, 1);
}

TEST(Ilp, StarNeedsTwoLinks) {
  auto inst = fixture::star3();
  CutLp lp = build_cut_lp(inst);
  auto res = solve_ilp(lp.model, {});
  EXPECT_EQ(res.objective, 2);
  EXPECT_EQ(*oracle::enumerate_opt(inst), 2);
  int ones = 0;
  for (const auto& v : res.solution) ones += v == 1;
  EXPECT_EQ(ones, 2);
}

TEST(Ilp, RandomInstancesMatchSubsetEnumeration) {
  int checked = 0;
  for (std::uint64_t seed = 1; checked < 25; ++seed) {
    auto inst = fixture::random_instance(12, seed, Family::RandomTree, CostModel::UniformInteger, 3, q(1));
    if (inst.link_count() > 18) continue;
    ++checked;
    CutLp lp = build_cut_lp(inst);
    std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
    auto ilp = solve_ilp(lp.model, oracles);
    EXPECT_EQ(ilp.objective, *oracle::enumerate_opt(inst)) << "seed " << seed;
    auto sep = solve_with_separation(lp.model, oracles);
    EXPECT_GE(ilp.objective, sep.outcome.objective);
    for (const auto& v : ilp.solution) EXPECT_TRUE(is_integral(v));
  }
}

TEST(Ilp, InfeasibleModel) {
  LpModel m{{q(1)}, {row({}, q(1))}};
  EXPECT_THROW(solve_ilp(m, {}), InfeasibleError);
}

TEST(DumpModel, ShowsRationalRows) {
  CutLp lp = build_cut_lp(fixture::star3());
  std::string s = dump_model(lp.model);
  EXPECT_NE(s.find(">= 1"), std::string::npos);
}
