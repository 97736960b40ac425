#ifndef WTAP_TESTS_FIXTURES_HPP
#define WTAP_TESTS_FIXTURES_HPP

#include <random>
#include <vector>

#include "wtap/generators.hpp"
#include "wtap/instance.hpp"

namespace fixture {

using namespace wtap;

inline Rational q(long p, long d = 1) { return make_rational(p, d); }

// Center 0, leaves 1..3, unit leaf-to-leaf links only.
inline WtapInstance star3(std::optional<NodeId> root = std::nullopt) {
  return WtapInstance::create(4, {{0, 1}, {0, 2}, {0, 3}}, {{1, 2, 1, {}}, {2, 3, 1, {}}, {1, 3, 1, {}}}, root);
}

inline std::vector<TreeEdge> path_edges(int n) {
  std::vector<TreeEdge> e;
  for (int v = 1; v < n; ++v) e.push_back({v - 1, v});
  return e;
}

inline WtapInstance random_instance(int n, std::uint64_t seed, Family f = Family::RandomTree,
                                    CostModel cm = CostModel::UniformInteger, int max_cost = 3,
                                    Rational density = Rational(3, 2)) {
  GeneratorSpec g;
  g.family = f;
  g.n = n;
  g.seed = seed;
  g.cost_model = cm;
  g.max_cost = max_cost;
  g.link_density = density;
  return generate(g);
}

// Random point with small denominators, topped up until every edge is
// covered at least once.
inline FractionalSolution random_covering_point(const WtapInstance& inst, std::mt19937_64& rng) {
  FractionalSolution x(inst.link_count());
  std::uniform_int_distribution<int> num(0, 3), den(1, 4);
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (inst.link(l).is_self_loop()) continue;
    x[l] = make_rational(num(rng), den(rng));
  }
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    Rational c = coverage(inst, x, e);
    if (c >= 1) continue;
    auto cov = cover_set(inst, std::vector<EdgeId>{e});
    std::uniform_int_distribution<std::size_t> pick(0, cov.size() - 1);
    x[cov[pick(rng)]] += 1 - c;
  }
  return x;
}

}  // namespace fixture

#endif  // WTAP_TESTS_FIXTURES_HPP
