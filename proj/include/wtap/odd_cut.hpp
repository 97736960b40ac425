#ifndef WTAP_ODD_CUT_HPP
#define WTAP_ODD_CUT_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtap/gomory_hu.hpp"
#include "wtap/instance.hpp"
#include "wtap/lp.hpp"

namespace wtap {

// Vertex set S (not necessarily connected) with |delta_G(S)| odd.
struct OddVertexSet {
  std::vector<NodeId> members;   // sorted
  std::vector<EdgeId> boundary;  // delta_G(S), sorted
};

inline std::vector<char> membership(const WtapInstance& inst, const OddVertexSet& s) {
  std::vector<char> in(inst.node_count(), 0);
  for (NodeId v : s.members) in[v] = 1;
  return in;
}

inline std::vector<EdgeId> boundary_of(const WtapInstance& inst, std::span<const char> in) {
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (in[inst.edge(e).u] != in[inst.edge(e).v]) out.push_back(e);
  }
  return out;
}

// Throws InvalidArgument when the boundary is even.
inline OddVertexSet make_odd_set(const WtapInstance& inst, std::span<const char> in) {
  if (static_cast<int>(in.size()) != inst.node_count()) throw InvalidArgument("membership size mismatch");
  OddVertexSet s;
  for (NodeId v = 0; v < inst.node_count(); ++v) {
    if (in[v]) s.members.push_back(v);
  }
  s.boundary = boundary_of(inst, in);
  if (s.boundary.size() % 2 == 0) {
    throw InvalidArgument("vertex set has even boundary (" + std::to_string(s.boundary.size()) + " edges)");
  }
  return s;
}

inline OddVertexSet make_odd_set(const WtapInstance& inst, std::span<const NodeId> members) {
  std::vector<char> in(inst.node_count(), 0);
  for (NodeId v : members) {
    inst.check_node(v);
    in[v] = 1;
  }
  return make_odd_set(inst, std::span<const char>(in));
}

// x(pi(S)) >= (|delta_G(S)| + 1) / 2 with pi(S) the multiset of links,
// link l counted ceil(|P_l cap delta_G(S)| / 2) times.
struct OddCutConstraint {
  std::vector<std::pair<LinkId, int>> multiplicities;
  Rational rhs;
  OddVertexSet source_set;

  Rational lhs(const FractionalSolution& x) const {
    Rational s = 0;
    for (const auto& [l, k] : multiplicities) s += k * x[l];
    return s;
  }
  Rational violation(const FractionalSolution& x) const { return rhs - lhs(x); }
};

inline OddCutConstraint make_constraint(const WtapInstance& inst, const OddVertexSet& s) {
  if (s.boundary.size() % 2 == 0) throw InvalidArgument("odd-cut constraint needs an odd boundary");
  std::vector<char> on_boundary(inst.edge_count(), 0);
  for (EdgeId e : s.boundary) on_boundary[e] = 1;
  OddCutConstraint c;
  c.source_set = s;
  c.rhs = Rational(static_cast<long>(s.boundary.size()) + 1, 2);
  c.rhs.canonicalize();
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    int hits = 0;
    for (EdgeId e : inst.link_path(l)) hits += on_boundary[e];
    if (hits > 0) c.multiplicities.push_back({l, (hits + 1) / 2});
  }
  return c;
}

// Covering constraint of e, as the odd cut of the side of G - e that does
// not contain node 0.
inline OddVertexSet covering_set(const WtapInstance& inst, EdgeId e) {
  auto side = inst.side_of(e, 0);
  for (auto& c : side) c = !c;
  return make_odd_set(inst, std::span<const char>(side));
}

// H = G + L; tree edge e weighted y_e = x(cov(e)) - 1, link l weighted x_l,
// terminals T = odd-degree nodes of G.
struct SlackGraph {
  WeightedGraph graph;  // first edge_count entries are the tree edges
  int tree_edge_count = 0;
  std::vector<char> terminal;

  int terminal_count() const { return static_cast<int>(std::count(terminal.begin(), terminal.end(), 1)); }
};

inline SlackGraph build_slack_graph(const WtapInstance& inst, const FractionalSolution& x) {
  check_solution(inst, x);
  SlackGraph h;
  h.graph.node_count = inst.node_count();
  h.tree_edge_count = inst.edge_count();
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    Rational y = coverage(inst, x, e) - 1;
    if (y < 0) {
      throw StateError("edge " + std::to_string(e) + " is under-covered; restore covering before building H");
    }
    h.graph.edges.push_back({inst.edge(e).u, inst.edge(e).v, y});
  }
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& k = inst.link(l);
    if (k.is_self_loop()) continue;
    h.graph.edges.push_back({k.u, k.v, x[l]});
  }
  h.terminal.assign(inst.node_count(), 0);
  for (NodeId v = 0; v < inst.node_count(); ++v) h.terminal[v] = inst.degree(v) % 2 == 1 ? 1 : 0;
  return h;
}

struct OddCutResult {
  std::vector<char> side;  // canonical: excludes node 0
  Rational value;
  GomoryHuTree tree;
};

namespace detail {

inline int tree_boundary_size(const SlackGraph& h, const std::vector<char>& side) {
  int k = 0;
  for (int i = 0; i < h.tree_edge_count; ++i) {
    if (side[h.graph.edges[i].u] != side[h.graph.edges[i].v]) ++k;
  }
  return k;
}

inline std::vector<char> canonical_side(std::vector<char> side) {
  if (!side.empty() && side[0]) {
    for (auto& c : side) c = !c;
  }
  return side;
}

// smaller |delta_G(S)| first, then lexicographically smaller member list
inline bool better_tie(const SlackGraph& h, const std::vector<char>& a, const std::vector<char>& b) {
  int da = tree_boundary_size(h, a), db = tree_boundary_size(h, b);
  if (da != db) return da < db;
  std::vector<int> ma, mb;
  for (std::size_t v = 0; v < a.size(); ++v) {
    if (a[v]) ma.push_back(static_cast<int>(v));
    if (b[v]) mb.push_back(static_cast<int>(v));
  }
  return ma < mb;
}

}  // namespace detail

// Padberg-Rao: the minimum T-odd cut is a fundamental cut of a Gomory-Hu
// tree of H.
inline OddCutResult min_odd_cut(const SlackGraph& h) {
  const int t_count = h.terminal_count();
  if (t_count == 0) throw InvalidArgument("slack graph has no odd-degree terminals");
  if (t_count % 2 != 0) throw InvalidArgument("terminal set has odd size");
  OddCutResult best;
  best.tree = gomory_hu(h.graph);
  bool found = false;
  for (int v = 0; v < h.graph.node_count; ++v) {
    if (best.tree.parent[v] == -1) continue;
    auto side = best.tree.side_of(v);
    int t_in = 0;
    for (int w = 0; w < h.graph.node_count; ++w) t_in += side[w] && h.terminal[w];
    if (t_in % 2 == 0) continue;
    side = detail::canonical_side(std::move(side));
    const Rational& value = best.tree.weight[v];
    if (!found || value < best.value || (value == best.value && detail::better_tie(h, side, best.side))) {
      best.side = std::move(side);
      best.value = value;
      found = true;
    }
  }
  if (!found) throw InternalError("Gomory-Hu tree has no T-odd fundamental cut");
  return best;
}

// Most violated covering constraint, ties by edge index.
inline std::optional<OddCutConstraint> separate_covering(const WtapInstance& inst, const FractionalSolution& x) {
  std::optional<EdgeId> worst;
  Rational worst_cov;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    Rational cov = coverage(inst, x, e);
    if (cov < 1 && (!worst || cov < worst_cov)) {
      worst = e;
      worst_cov = cov;
    }
  }
  if (!worst) return std::nullopt;
  return make_constraint(inst, covering_set(inst, *worst));
}

// A violated covering constraint if there is one; otherwise the odd-cut
// constraint of a minimum T-odd cut of H when its value is below 1.
inline std::optional<OddCutConstraint> separate_odd_cut(const WtapInstance& inst, const FractionalSolution& x) {
  check_solution(inst, x);
  if (auto cov = separate_covering(inst, x)) return cov;
  if (inst.edge_count() == 0) return std::nullopt;
  SlackGraph h = build_slack_graph(inst, x);
  OddCutResult cut = min_odd_cut(h);
  if (cut.value >= 1) return std::nullopt;
  auto constraint = make_constraint(inst, make_odd_set(inst, std::span<const char>(cut.side)));
  Rational expected = (1 - cut.value) / 2;
  if (constraint.violation(x) != expected) {
    throw InternalError("odd-cut violation " + to_string(constraint.violation(x)) + " does not match (1 - " +
                        to_string(cut.value) + ")/2");
  }
  return constraint;
}

// Exhaustive scan over all S not containing node 0 (S and V \ S give the
// same constraint). Returns the most violated constraint; ties by smaller
// |delta_G(S)|, then lexicographic member list.
inline std::optional<OddCutConstraint> brute_force_separate(const WtapInstance& inst, const FractionalSolution& x,
                                                            int max_nodes = 20) {
  check_solution(inst, x);
  const int n = inst.node_count();
  if (n > max_nodes) throw ResourceError("brute-force separation limited to " + std::to_string(max_nodes) + " nodes");
  if (n <= 1) return std::nullopt;
  std::vector<std::uint32_t> path_mask(inst.link_count(), 0);
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    for (EdgeId e : inst.link_path(l)) path_mask[l] |= 1u << e;
  }
  std::optional<std::uint32_t> best_set;
  Rational best_violation = 0;
  int best_boundary = 0;
  auto members_of = [n](std::uint32_t s) {
    std::vector<int> m;
    for (int v = 1; v < n; ++v) {
      if (s >> (v - 1) & 1u) m.push_back(v);
    }
    return m;
  };
  const std::uint32_t limit = 1u << (n - 1);
  for (std::uint32_t s = 1; s < limit; ++s) {
    std::uint32_t delta = 0;
    for (EdgeId e = 0; e < inst.edge_count(); ++e) {
      const auto& ed = inst.edge(e);
      bool iu = ed.u != 0 && (s >> (ed.u - 1) & 1u);
      bool iv = ed.v != 0 && (s >> (ed.v - 1) & 1u);
      if (iu != iv) delta |= 1u << e;
    }
    const int boundary = std::popcount(delta);
    if (boundary % 2 == 0) continue;
    Rational lhs = 0;
    for (LinkId l = 0; l < inst.link_count(); ++l) {
      int hits = std::popcount(path_mask[l] & delta);
      if (hits > 0 && x[l] != 0) lhs += ((hits + 1) / 2) * x[l];
    }
    Rational violation = Rational(boundary + 1, 2) - lhs;
    if (violation <= 0) continue;
    bool take = !best_set || violation > best_violation ||
                (violation == best_violation &&
                 (boundary < best_boundary || (boundary == best_boundary && members_of(s) < members_of(*best_set))));
    if (take) {
      best_set = s;
      best_violation = violation;
      best_boundary = boundary;
    }
  }
  if (!best_set) return std::nullopt;
  return make_constraint(inst, make_odd_set(inst, std::span<const int>(members_of(*best_set))));
}

// Maps an odd-cut constraint onto LP columns. `column_of_link[l]` is the
// column of link l, or -1 when the link has no column (fixed at zero).
inline LinearConstraint to_linear(const OddCutConstraint& c, std::span<const int> column_of_link) {
  LinearConstraint row;
  row.rhs = c.rhs;
  row.tag = c.source_set.boundary.size() == 1 ? ConstraintTag::Covering : ConstraintTag::OddCut;
  for (const auto& [l, k] : c.multiplicities) {
    if (column_of_link[l] >= 0) row.coefficients.push_back({column_of_link[l], Rational(k)});
  }
  std::string label = "S={";
  for (std::size_t i = 0; i < c.source_set.members.size(); ++i) {
    label += (i ? "," : "") + std::to_string(c.source_set.members[i]);
  }
  label += "} |delta|=" + std::to_string(c.source_set.boundary.size());
  row.label = std::move(label);
  return row;
}

// Cut LP of an instance: one column per non-loop link, one covering row per
// edge.
struct CutLp {
  LpModel model;
  std::vector<LinkId> link_of_column;
  std::vector<int> column_of_link;  // -1 for self-loops

  FractionalSolution to_solution(std::span<const Rational> column_values, int link_count) const {
    FractionalSolution x(link_count);
    for (std::size_t j = 0; j < link_of_column.size(); ++j) x[link_of_column[j]] = column_values[j];
    return x;
  }
};

inline CutLp build_cut_lp(const WtapInstance& inst) {
  CutLp lp;
  lp.column_of_link.assign(inst.link_count(), -1);
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (inst.link(l).is_self_loop()) continue;
    lp.column_of_link[l] = static_cast<int>(lp.link_of_column.size());
    lp.link_of_column.push_back(l);
    lp.model.objective.push_back(inst.link(l).cost);
  }
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    LinearConstraint row;
    row.rhs = 1;
    row.tag = ConstraintTag::Covering;
    row.label = "cov(e" + std::to_string(e) + ")";
    for (LinkId l : inst.edge_cover(e)) row.coefficients.push_back({lp.column_of_link[l], Rational(1)});
    lp.model.constraints.push_back(std::move(row));
  }
  return lp;
}

// Separation oracle over the columns of build_cut_lp(inst). Holds its own
// copy of the instance.
inline SeparationOracle make_odd_cut_oracle(const WtapInstance& inst) {
  auto shared = std::make_shared<const WtapInstance>(inst);
  auto lp = std::make_shared<const CutLp>(build_cut_lp(inst));
  return [shared, lp](std::span<const Rational> values) -> std::optional<LinearConstraint> {
    FractionalSolution x = lp->to_solution(values, shared->link_count());
    auto c = separate_odd_cut(*shared, x);
    if (!c) return std::nullopt;
    return to_linear(*c, lp->column_of_link);
  };
}

}  // namespace wtap

#endif  // WTAP_ODD_CUT_HPP
