#ifndef WTAP_GOMORY_HU_HPP
#define WTAP_GOMORY_HU_HPP

#include <deque>
#include <sstream>
#include <string>
#include <vector>

#include "wtap/errors.hpp"
#include "wtap/rational.hpp"

namespace wtap {

struct WeightedEdge {
  int u;
  int v;
  Rational weight;
};

// Undirected multigraph with nonnegative rational weights.
struct WeightedGraph {
  int node_count = 0;
  std::vector<WeightedEdge> edges;

  // Total weight of edges with exactly one endpoint marked.
  Rational cut_value(const std::vector<char>& side) const {
    Rational s = 0;
    for (const auto& e : edges) {
      if (side[e.u] != side[e.v]) s += e.weight;
    }
    return s;
  }
};

struct MinCut {
  Rational value;
  std::vector<char> source_side;
};

// Edmonds-Karp on the bidirected residual network.
inline MinCut min_st_cut(const WeightedGraph& g, int s, int t) {
  if (s == t) throw InvalidArgument("source equals sink");
  struct Arc {
    int to;
    Rational residual;
  };
  std::vector<Arc> arcs;
  std::vector<std::vector<int>> out(g.node_count);
  for (const auto& e : g.edges) {
    if (e.weight < 0) throw InvalidArgument("negative edge weight");
    if (e.u == e.v) continue;
    out[e.u].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({e.v, e.weight});
    out[e.v].push_back(static_cast<int>(arcs.size()));
    arcs.push_back({e.u, e.weight});
  }
  Rational flow = 0;
  std::vector<int> via(g.node_count);
  for (;;) {
    std::fill(via.begin(), via.end(), -1);
    std::deque<int> queue{s};
    std::vector<char> seen(g.node_count, 0);
    seen[s] = 1;
    while (!queue.empty() && !seen[t]) {
      int v = queue.front();
      queue.pop_front();
      for (int a : out[v]) {
        int w = arcs[a].to;
        if (!seen[w] && sgn(arcs[a].residual) > 0) {
          seen[w] = 1;
          via[w] = a;
          queue.push_back(w);
        }
      }
    }
    if (!seen[t]) {
      return {flow, seen};
    }
    Rational push = arcs[via[t]].residual;
    for (int v = t; v != s; v = arcs[via[v] ^ 1].to) {
      if (arcs[via[v]].residual < push) push = arcs[via[v]].residual;
    }
    for (int v = t; v != s; v = arcs[via[v] ^ 1].to) {
      arcs[via[v]].residual -= push;
      arcs[via[v] ^ 1].residual += push;
    }
    flow += push;
  }
}

// Cut tree: parent[0] == -1; for v > 0 the tree edge (v, parent[v]) has
// weight[v], and the component of v after deleting that edge is a minimum
// cut between v and parent[v] in the original graph.
struct GomoryHuTree {
  std::vector<int> parent;
  std::vector<Rational> weight;

  // Nodes on v's side of the tree edge (v, parent[v]).
  std::vector<char> side_of(int v) const {
    const int n = static_cast<int>(parent.size());
    std::vector<char> mark(n, 0);
    for (int w = 0; w < n; ++w) {
      int x = w;
      int guard = 0;
      while (x != -1 && x != v && guard++ <= n) x = parent[x];
      mark[w] = x == v ? 1 : 0;
    }
    return mark;
  }
};

// Gusfield's variant: n-1 max-flow computations on the original graph, no
// node contraction, followed by the parent swap that turns the equivalent
// flow tree into a cut tree.
inline GomoryHuTree gomory_hu(const WeightedGraph& g) {
  const int n = g.node_count;
  GomoryHuTree tree;
  tree.parent.assign(n, 0);
  tree.weight.assign(n, Rational(0));
  if (n == 0) return tree;
  tree.parent[0] = -1;
  for (int s = 1; s < n; ++s) {
    const int t = tree.parent[s];
    MinCut cut = min_st_cut(g, s, t);
    tree.weight[s] = cut.value;
    for (int i = 0; i < n; ++i) {
      if (i != s && cut.source_side[i] && tree.parent[i] == t) tree.parent[i] = s;
    }
    if (tree.parent[t] != -1 && cut.source_side[tree.parent[t]]) {
      tree.parent[s] = tree.parent[t];
      tree.parent[t] = s;
      tree.weight[s] = tree.weight[t];
      tree.weight[t] = cut.value;
    }
  }
  return tree;
}

inline std::string dump_gomory_hu(const GomoryHuTree& tree) {
  std::ostringstream os;
  for (std::size_t v = 0; v < tree.parent.size(); ++v) {
    if (tree.parent[v] == -1) continue;
    os << v << " " << tree.parent[v] << " " << to_string(tree.weight[v]) << "\n";
  }
  return os.str();
}

}  // namespace wtap

#endif  // WTAP_GOMORY_HU_HPP
