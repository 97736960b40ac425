#ifndef WTAP_GENERATORS_HPP
#define WTAP_GENERATORS_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "wtap/instance.hpp"

namespace wtap {

enum class Family { RandomTree, Star, Path, Caterpillar, UpCrossOnly, LeafToLeaf, CycleOnLeaves };
enum class CostModel { Unit, UniformInteger, Rational };

inline const char* to_string(Family f) {
  switch (f) {
    case Family::RandomTree:
      return "random-tree";
    case Family::Star:
      return "star";
    case Family::Path:
      return "path";
    case Family::Caterpillar:
      return "caterpillar";
    case Family::UpCrossOnly:
      return "up-cross-only";
    case Family::LeafToLeaf:
      return "leaf-to-leaf";
    case Family::CycleOnLeaves:
      return "cycle-on-leaves";
  }
  return "?";
}

inline Family parse_family(const std::string& s) {
  for (Family f : {Family::RandomTree, Family::Star, Family::Path, Family::Caterpillar, Family::UpCrossOnly,
                   Family::LeafToLeaf, Family::CycleOnLeaves}) {
    if (s == to_string(f)) return f;
  }
  throw InvalidArgument("unknown family '" + s + "'");
}

inline const char* to_string(CostModel c) {
  switch (c) {
    case CostModel::Unit:
      return "unit";
    case CostModel::UniformInteger:
      return "integer";
    case CostModel::Rational:
      return "rational";
  }
  return "?";
}

inline CostModel parse_cost_model(const std::string& s) {
  for (CostModel c : {CostModel::Unit, CostModel::UniformInteger, CostModel::Rational}) {
    if (s == to_string(c)) return c;
  }
  throw InvalidArgument("unknown cost model '" + s + "'");
}

struct GeneratorSpec {
  Family family = Family::RandomTree;
  int n = 8;
  Rational link_density{3, 2};  // links per node, before repair
  CostModel cost_model = CostModel::UniformInteger;
  int max_cost = 3;
  std::uint64_t seed = 1;
};

// Uniform labelled tree from a random Pruefer sequence.
inline std::vector<TreeEdge> random_tree(int n, std::mt19937_64& rng) {
  std::vector<TreeEdge> edges;
  if (n <= 1) return edges;
  if (n == 2) return {{0, 1}};
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<int> seq(n - 2);
  for (int& s : seq) s = pick(rng);
  std::vector<int> degree(n, 1);
  for (int s : seq) ++degree[s];
  for (int s : seq) {
    int leaf = 0;
    while (degree[leaf] != 1) ++leaf;
    edges.push_back({std::min(leaf, s), std::max(leaf, s)});
    --degree[leaf];
    --degree[s];
  }
  int a = -1, b = -1;
  for (int v = 0; v < n; ++v) {
    if (degree[v] == 1) (a == -1 ? a : b) = v;
  }
  edges.push_back({a, b});
  return edges;
}

namespace detail {

inline Rational draw_cost(const GeneratorSpec& spec, std::mt19937_64& rng) {
  switch (spec.cost_model) {
    case CostModel::Unit:
      return 1;
    case CostModel::UniformInteger:
      return std::uniform_int_distribution<int>(1, spec.max_cost)(rng);
    case CostModel::Rational: {
      int q = std::uniform_int_distribution<int>(1, 4)(rng);
      int k = std::uniform_int_distribution<int>(0, q * (spec.max_cost - 1))(rng);
      Rational c(q + k, q);
      c.canonicalize();
      return c;
    }
  }
  return 1;
}

inline std::vector<TreeEdge> family_tree(const GeneratorSpec& spec, std::mt19937_64& rng) {
  const int n = spec.n;
  std::vector<TreeEdge> edges;
  switch (spec.family) {
    case Family::Star:
      for (int v = 1; v < n; ++v) edges.push_back({0, v});
      return edges;
    case Family::Path:
      for (int v = 1; v < n; ++v) edges.push_back({v - 1, v});
      return edges;
    case Family::Caterpillar: {
      const int spine = std::max(2, (n + 1) / 2);
      for (int v = 1; v < std::min(spine, n); ++v) edges.push_back({v - 1, v});
      std::uniform_int_distribution<int> at(0, spine - 1);
      for (int v = spine; v < n; ++v) edges.push_back({at(rng), v});
      return edges;
    }
    default:
      return random_tree(n, rng);
  }
}

}  // namespace detail

// Deterministic per seed. Edges left uncovered by the sampled links are
// repaired with an extra link that fits the family.
inline WtapInstance generate(const GeneratorSpec& spec) {
  if (spec.n < 2) throw InvalidArgument("generator needs n >= 2");
  if (spec.max_cost < 1) throw InvalidArgument("max cost must be at least 1");
  if (spec.link_density < 0) throw InvalidArgument("link density must be nonnegative");
  std::mt19937_64 rng(spec.seed);
  std::vector<TreeEdge> edges = detail::family_tree(spec, rng);
  const bool rooted = spec.family == Family::UpCrossOnly;
  WtapInstance tree = WtapInstance::create(spec.n, edges, {}, rooted ? std::optional<NodeId>(0) : std::nullopt);
  const auto leaves = tree.leaves();
  const bool leaf_only = spec.family == Family::LeafToLeaf || spec.family == Family::CycleOnLeaves;

  std::vector<Link> links;
  auto add = [&](NodeId a, NodeId b) { links.push_back(Link{std::min(a, b), std::max(a, b), detail::draw_cost(spec, rng), {}}); };
  const long target = std::max<long>(1, to_long_checked(floor_of(spec.link_density * spec.n)));
  std::uniform_int_distribution<int> node(0, spec.n - 1);
  std::uniform_int_distribution<std::size_t> leaf(0, leaves.size() - 1);

  if (spec.family == Family::CycleOnLeaves) {
    // leaves in DFS order, linked cyclically
    std::vector<NodeId> dfs;
    std::vector<std::pair<NodeId, NodeId>> stack{{0, kNoNode}};
    while (!stack.empty()) {
      auto [v, from] = stack.back();
      stack.pop_back();
      if (tree.degree(v) == 1) dfs.push_back(v);
      auto nb = tree.neighbors(v);
      for (auto it = nb.rbegin(); it != nb.rend(); ++it) {
        if (it->first != from) stack.push_back({it->first, v});
      }
    }
    if (dfs.size() == 2) {
      add(dfs[0], dfs[1]);
    } else {
      for (std::size_t i = 0; i < dfs.size(); ++i) add(dfs[i], dfs[(i + 1) % dfs.size()]);
    }
  } else {
    for (long tries = 0; static_cast<long>(links.size()) < target && tries < 50 * target; ++tries) {
      NodeId a, b;
      if (leaf_only) {
        a = leaves[leaf(rng)];
        b = leaves[leaf(rng)];
      } else {
        a = node(rng);
        b = node(rng);
      }
      if (a == b) continue;
      if (rooted) {
        NodeId w = tree.lca(a, b);
        if (w != a && w != b && w != 0) continue;
      }
      add(a, b);
    }
  }

  // repair: walk edges, add a link over each uncovered one
  for (;;) {
    WtapInstance cur = WtapInstance::create(spec.n, edges, links, tree.root());
    EdgeId gap = -1;
    for (EdgeId e = 0; e < cur.edge_count() && gap == -1; ++e) {
      if (cur.edge_cover(e).empty()) gap = e;
    }
    if (gap == -1) return cur;
    NodeId low = cur.lower_end(gap);
    if (leaf_only) {
      NodeId inside = kNoNode, outside = kNoNode;
      for (NodeId l : leaves) {
        if (cur.in_subtree(l, low)) {
          if (inside == kNoNode) inside = l;
        } else if (outside == kNoNode) {
          outside = l;
        }
      }
      add(inside, outside);
    } else {
      add(low, cur.anchor());
    }
  }
}

}  // namespace wtap

#endif  // WTAP_GENERATORS_HPP
