#ifndef WTAP_DECOMPOSITION_HPP
#define WTAP_DECOMPOSITION_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wtap/bundles.hpp"
#include "wtap/exact.hpp"
#include "wtap/instance.hpp"
#include "wtap/odd_cut.hpp"

namespace wtap {

struct AlgorithmParams {
  Rational epsilon{1, 2};
  Rational cost_bound{1};  // M
  int gamma = 0;
  Rational alpha_thin;
  Rational heavy_threshold;
  Rational beta;
  int restart_limit = 25;

  // gamma = ceil(28M/eps^2), alpha = 4M/eps^2, beta = 10M/eps^2, heavy = 2/eps
  static AlgorithmParams defaults(const Rational& epsilon, const Rational& cost_bound) {
    AlgorithmParams p;
    p.epsilon = epsilon;
    p.cost_bound = cost_bound;
    p.validate_base();
    const Rational e2 = epsilon * epsilon;
    p.gamma = static_cast<int>(to_long_checked(ceil_of(28 * cost_bound / e2)));
    p.alpha_thin = 4 * cost_bound / e2;
    p.beta = 10 * cost_bound / e2;
    p.heavy_threshold = 2 / epsilon;
    return p;
  }

  void validate() const {
    validate_base();
    if (gamma < 1) throw InvalidArgument("gamma must be positive");
    if (alpha_thin < 0 || beta < 0) throw InvalidArgument("thresholds must be nonnegative");
    if (heavy_threshold <= 0) throw InvalidArgument("heavy threshold must be positive");
    if (restart_limit < 0) throw InvalidArgument("restart limit must be nonnegative");
  }

 private:
  void validate_base() const {
    if (epsilon <= 0 || epsilon > 1) throw InvalidArgument("epsilon must lie in (0,1], got " + to_string(epsilon));
    if (cost_bound < 1) throw InvalidArgument("cost bound M must be at least 1, got " + to_string(cost_bound));
  }
};

// A subtree of the contracted working tree with its own solution. The
// subtree's lineage leads back to the working instance, so its links and
// edges can be lifted.
struct DecompPair {
  WtapInstance subtree;
  FractionalSolution local_x;
  std::optional<NodeId> beta_center;
};

// Side of e that contains the pair's node 0 comes first.
struct EdgeSides {
  NodeId near = kNoNode;  // endpoint on node 0's side
  NodeId far = kNoNode;
  std::vector<char> near_side;
  Rational near_mass;
  Rational far_mass;
};

// Link-cost mass c_l x_l of links with both endpoints in the node set.
inline Rational inside_mass(const WtapInstance& inst, const FractionalSolution& x, std::span<const char> member) {
  Rational s = 0;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& k = inst.link(l);
    if (x[l] != 0 && member[k.u] && member[k.v]) s += k.cost * x[l];
  }
  return s;
}

inline EdgeSides edge_sides(const WtapInstance& inst, const FractionalSolution& x, EdgeId e) {
  EdgeSides s;
  const TreeEdge& ed = inst.edge(e);
  s.near_side = inst.side_of(e, 0);
  s.near = s.near_side[ed.u] ? ed.u : ed.v;
  s.far = s.near == ed.u ? ed.v : ed.u;
  std::vector<char> far_side(s.near_side.size());
  for (std::size_t v = 0; v < far_side.size(); ++v) far_side[v] = !s.near_side[v];
  s.near_mass = inside_mass(inst, x, s.near_side);
  s.far_mass = inside_mass(inst, x, far_side);
  return s;
}

inline std::vector<EdgeId> heavy_edges(const WtapInstance& inst, const FractionalSolution& x,
                                       const AlgorithmParams& params) {
  check_solution(inst, x);
  std::vector<EdgeId> out;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (coverage(inst, x, e) >= params.heavy_threshold) out.push_back(e);
  }
  return out;
}

struct HeavyCover {
  std::vector<LinkId> links;
  Rational cost = 0;
};

// Contract the light edges, root at node 0 and solve over up-links only.
// Each link's two up-shadows exist by shadow closure, and (eps/2) x is a
// fractional cover of the heavy edges, so the result costs at most eps c.x.
inline HeavyCover cover_heavy(const WtapInstance& inst, const FractionalSolution& x, std::span<const EdgeId> heavy,
                              const AlgorithmParams& params) {
  (void)x;
  (void)params;
  if (heavy.empty()) return {};
  std::vector<char> is_heavy(inst.edge_count(), 0);
  for (EdgeId e : heavy) is_heavy.at(e) = 1;
  std::vector<EdgeId> light;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (!is_heavy[e]) light.push_back(e);
  }
  ContractionResult c = contract(inst, light);
  WtapInstance rooted = with_root(c.instance, 0);
  std::vector<LinkId> up;
  for (LinkId l = 0; l < rooted.link_count(); ++l) {
    if (!rooted.link(l).is_self_loop() && classify_link(rooted, l) == LinkClass::Up) up.push_back(l);
  }
  UpCrossResult r = solve_up_cross_exact(rooted, up);
  HeavyCover out;
  out.links = r.solution.links;  // contraction keeps link indices
  out.cost = cost_of(inst, out.links);
  return out;
}

inline std::optional<EdgeId> find_alpha_thin_edge(const DecompPair& pair, const Rational& alpha) {
  for (EdgeId e = 0; e < pair.subtree.edge_count(); ++e) {
    EdgeSides s = edge_sides(pair.subtree, pair.local_x, e);
    if (s.near_mass >= alpha && s.far_mass >= alpha) return e;
  }
  return std::nullopt;
}

struct SplitResult {
  DecompPair near;
  DecompPair far;
  Rational cost_increase;  // c.x^near + c.x^far - c.x
};

namespace detail {

inline DecompPair restrict_pair(const WtapInstance& inst, const FractionalSolution& x, std::span<const char> side) {
  RestrictionResult r = restrict_to_nodes(inst, side);
  FractionalSolution local(r.instance.link_count());
  for (LinkId l = 0; l < r.instance.link_count(); ++l) local[l] = x[r.link_from[l]];
  return {std::move(r.instance), std::move(local), std::nullopt};
}

}  // namespace detail

// Links inside a side keep their value. A link pq crossing e = {u,v}
// (p on u's side) is removed and its value, scaled by c_pq / c_pu, moves to
// the cheapest shadow pu; symmetric for qv. When p == u nothing of the
// link lies on u's side and nothing moves there.
inline SplitResult split_along_edge(const DecompPair& pair, EdgeId e) {
  const WtapInstance& t = pair.subtree;
  const FractionalSolution& x = pair.local_x;
  if (e < 0 || e >= t.edge_count()) throw InvalidArgument("edge " + std::to_string(e) + " not in subtree");
  EdgeSides s = edge_sides(t, x, e);
  FractionalSolution moved = x;
  for (LinkId l : t.edge_cover(e)) {
    if (x[l] == 0) continue;
    const Link& k = t.link(l);
    moved[l] = 0;
    NodeId p = s.near_side[k.u] ? k.u : k.v;
    NodeId q = p == k.u ? k.v : k.u;
    for (auto [end, anchor] : {std::pair{p, s.near}, std::pair{q, s.far}}) {
      if (end == anchor) continue;
      auto shadow = cheapest_link_between(t, end, anchor);
      if (!shadow) {
        throw StateError("no shadow link between " + std::to_string(end) + " and " + std::to_string(anchor) +
                         "; instance is not shadow-complete");
      }
      const Rational& cs = t.link(*shadow).cost;
      if (cs <= 0) throw InvalidArgument("shadow link has nonpositive cost");
      moved[*shadow] += k.cost / cs * x[l];
    }
  }
  std::vector<char> far_side(s.near_side.size());
  for (std::size_t v = 0; v < far_side.size(); ++v) far_side[v] = !s.near_side[v];
  SplitResult out{detail::restrict_pair(t, moved, s.near_side), detail::restrict_pair(t, moved, far_side), 0};
  out.cost_increase = cost_of(out.near.subtree, out.near.local_x) + cost_of(out.far.subtree, out.far.local_x) -
                      cost_of(t, x);
  return out;
}

// Components K_j of the subtree minus the center.
struct CenterComponent {
  std::vector<char> member;
  EdgeId connector = -1;  // edge to the center
  Rational mass;
  int leaves = 0;
};

inline std::vector<CenterComponent> center_components(const WtapInstance& t, const FractionalSolution& x,
                                                      NodeId center) {
  std::vector<CenterComponent> out;
  for (const auto& [w, f] : t.neighbors(center)) {
    CenterComponent k;
    k.connector = f;
    k.member = t.side_of(f, w);
    k.mass = inside_mass(t, x, k.member);
    int size = 0;
    for (NodeId v = 0; v < t.node_count(); ++v) {
      if (!k.member[v]) continue;
      ++size;
      int deg = 0;
      for (const auto& [a, g] : t.neighbors(v)) deg += k.member[a];
      if (deg <= 1) ++k.leaves;
    }
    if (size == 1) k.leaves = 1;
    out.push_back(std::move(k));
  }
  return out;
}

// Case (a): an edge with both sides below the threshold gives its endpoint
// u. Case (b): orient every edge toward its heavy side; a sink exists.
inline NodeId find_beta_center(const DecompPair& pair, const Rational& threshold) {
  const WtapInstance& t = pair.subtree;
  if (t.edge_count() == 0) return 0;
  std::vector<int> outdeg(t.node_count(), 0);
  for (EdgeId e = 0; e < t.edge_count(); ++e) {
    EdgeSides s = edge_sides(t, pair.local_x, e);
    const bool near_big = s.near_mass >= threshold, far_big = s.far_mass >= threshold;
    if (near_big && far_big) {
      throw StateError("edge " + std::to_string(e) + " is still thin; split it before locating a center");
    }
    if (!near_big && !far_big) return t.edge(e).u;
    ++outdeg[near_big ? s.far : s.near];
  }
  for (NodeId v = 0; v < t.node_count(); ++v) {
    if (outdeg[v] == 0) return v;
  }
  throw InternalError("edge orientation of a tree has no sink");
}

struct DecompositionResult {
  WtapInstance working;     // shadow-complete instance the LP lives on
  WtapInstance contracted;  // working with the edges covered by L^h contracted
  std::vector<NodeId> contraction_map;
  FractionalSolution x;
  std::vector<DecompPair> pairs;
  std::vector<EdgeId> heavy_edges;   // working edge ids
  std::vector<LinkId> heavy_cover;   // L^h, working link ids
  std::vector<EdgeId> split_edges;   // E^s, working edge ids
  std::vector<LinkId> split_cover;   // L^s
  std::vector<NodeId> contracted_nodes;  // V^h, ids of `contracted`
  Rational cost_x = 0;
  Rational cost_pairs = 0;
  Rational cost_heavy = 0;
  Rational cost_split = 0;
};

// Number of pair nodes that stand for two or more working nodes, i.e. that
// were produced by contracting L^h.
inline int contracted_node_count(const WtapInstance& subtree) {
  std::vector<int> preimage(subtree.node_count(), 0);
  for (NodeId img : subtree.lineage().node_image) {
    if (img != kNoNode) ++preimage[img];
  }
  return static_cast<int>(std::count_if(preimage.begin(), preimage.end(), [](int k) { return k >= 2; }));
}

// Working-instance link ids of a pair's solution.
inline FractionalSolution lift_solution(const WtapInstance& working, const DecompPair& pair) {
  FractionalSolution out(working.link_count());
  const auto& source = pair.subtree.lineage().link_source;
  for (LinkId l = 0; l < pair.subtree.link_count(); ++l) out[source[l]] += pair.local_x[l];
  return out;
}

// Inclusion-minimal cover of `edges`: cheapest covering link per edge, then
// drop links whose removal keeps every edge covered.
inline std::vector<LinkId> minimal_cover(const WtapInstance& inst, std::span<const EdgeId> edges) {
  std::vector<LinkId> chosen;
  for (EdgeId e : edges) {
    std::optional<LinkId> best;
    for (LinkId l : inst.edge_cover(e)) {
      if (!best || inst.link(l).cost < inst.link(*best).cost) best = l;
    }
    if (!best) throw InfeasibleError("edge " + std::to_string(e) + " is covered by no link");
    chosen.push_back(*best);
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  for (std::size_t i = 0; i < chosen.size();) {
    std::vector<LinkId> rest = chosen;
    rest.erase(rest.begin() + static_cast<long>(i));
    if (covers(inst, rest, edges)) {
      chosen = std::move(rest);
    } else {
      ++i;
    }
  }
  return chosen;
}

inline DecompositionResult decompose(const WtapInstance& working, const FractionalSolution& x,
                                     const AlgorithmParams& params) {
  params.validate();
  check_solution(working, x);
  if (!working.lineage().is_root()) throw InvalidArgument("decompose expects an original (uncontracted) instance");
  DecompositionResult res;
  res.working = working;
  res.x = x;
  res.cost_x = cost_of(working, x);
  res.heavy_edges = heavy_edges(working, x, params);
  HeavyCover hc = cover_heavy(working, x, res.heavy_edges, params);
  res.heavy_cover = hc.links;
  res.cost_heavy = hc.cost;

  auto covered = covered_edges(working, res.heavy_cover);
  std::vector<EdgeId> to_contract;
  for (EdgeId e = 0; e < working.edge_count(); ++e) {
    if (covered[e]) to_contract.push_back(e);
  }
  ContractionResult c = contract(working, to_contract);
  res.contracted = c.instance;
  res.contraction_map = c.node_map;
  std::vector<int> preimage(res.contracted.node_count(), 0);
  for (NodeId img : res.contraction_map) ++preimage[img];
  for (NodeId v = 0; v < res.contracted.node_count(); ++v) {
    if (preimage[v] >= 2) res.contracted_nodes.push_back(v);
  }

  std::vector<char> all(res.contracted.node_count(), 1);
  std::vector<DecompPair> stack{detail::restrict_pair(res.contracted, x, all)};
  while (!stack.empty()) {
    DecompPair pair = std::move(stack.back());
    stack.pop_back();
    if (auto e = find_alpha_thin_edge(pair, params.alpha_thin)) {
      res.split_edges.push_back(pair.subtree.lineage().edge_source[*e]);
      SplitResult s = split_along_edge(pair, *e);
      stack.push_back(std::move(s.far));
      stack.push_back(std::move(s.near));
      continue;
    }
    pair.beta_center = find_beta_center(pair, params.alpha_thin);
    res.pairs.push_back(std::move(pair));
  }
  res.split_cover = minimal_cover(working, res.split_edges);
  res.cost_split = cost_of(working, res.split_cover);
  for (const auto& p : res.pairs) res.cost_pairs += cost_of(p.subtree, p.local_x);
  return res;
}

// A bundle row some rounding asked for, with the pair whose local solution
// it must hold for. Row coefficients use working link ids.
struct QueriedRow {
  int pair = 0;
  BundleConstraint row;
};

struct PropertyCheck {
  bool ok = true;
  std::string witness;
};

struct DecompositionReport {
  PropertyCheck odd_cut_feasible;  // (1)
  PropertyCheck disjoint;          // (2)
  PropertyCheck simple;            // (3)
  PropertyCheck cost_increase;     // (4)
  PropertyCheck cheap_covers;      // (5)
  Rational pairs_bound_loose;      // (1+eps) c.x
  Rational pairs_bound_explicit;   // (1 + eps/(2-eps)) c.x
  Rational heavy_bound;            // eps c.x
  Rational split_bound;            // eps^2/4 sum c.x^i

  bool all_ok() const {
    return odd_cut_feasible.ok && disjoint.ok && simple.ok && cost_increase.ok && cheap_covers.ok;
  }
};

namespace detail {

inline void fail(PropertyCheck& p, const std::string& why) {
  if (!p.ok) return;  // keep the first witness
  p.ok = false;
  p.witness = why;
}

inline std::string member_list(std::span<const NodeId> members) {
  std::string s = "{";
  for (std::size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + std::to_string(members[i]);
  return s + "}";
}

}  // namespace detail

inline DecompositionReport verify_decomposition(const DecompositionResult& res, const AlgorithmParams& params,
                                                std::span<const QueriedRow> rows = {}, int exhaustive_limit = 16) {
  DecompositionReport rep;
  const Rational& eps = params.epsilon;

  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    const DecompPair& p = res.pairs[i];
    if (p.subtree.edge_count() == 0) continue;
    std::optional<OddCutConstraint> cut;
    try {
      cut = p.subtree.node_count() <= exhaustive_limit ? brute_force_separate(p.subtree, p.local_x, exhaustive_limit)
                                                       : separate_odd_cut(p.subtree, p.local_x);
    } catch (const StateError& ex) {
      detail::fail(rep.odd_cut_feasible, "pair " + std::to_string(i) + ": " + ex.what());
      continue;
    }
    if (cut) {
      detail::fail(rep.odd_cut_feasible, "pair " + std::to_string(i) + " violates the odd cut of S=" +
                                             detail::member_list(cut->source_set.members) + " by " +
                                             to_string(cut->violation(p.local_x)));
    }
  }
  for (const auto& q : rows) {
    if (q.pair < 0 || q.pair >= static_cast<int>(res.pairs.size())) throw InvalidArgument("row names no pair");
    FractionalSolution lifted = lift_solution(res.working, res.pairs[q.pair]);
    Rational v = q.row.violation(lifted);
    if (v > 0) {
      detail::fail(rep.odd_cut_feasible, "pair " + std::to_string(q.pair) + " violates a bundle row with OPT " +
                                             to_string(q.row.rhs) + " by " + to_string(v));
    }
  }

  std::vector<int> owner_node(res.working.node_count(), -1);
  std::vector<int> owner_link(res.working.link_count(), -1);
  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    const DecompPair& p = res.pairs[i];
    const Lineage& lin = p.subtree.lineage();
    for (NodeId a = 0; a < res.working.node_count(); ++a) {
      if (lin.node_image[a] == kNoNode) continue;
      if (owner_node[a] != -1) {
        detail::fail(rep.disjoint, "working node " + std::to_string(a) + " lies in pairs " +
                                       std::to_string(owner_node[a]) + " and " + std::to_string(i));
      }
      owner_node[a] = static_cast<int>(i);
    }
    for (LinkId l = 0; l < p.subtree.link_count(); ++l) {
      if (p.local_x[l] == 0) continue;
      LinkId w = lin.link_source[l];
      if (owner_link[w] != -1 && owner_link[w] != static_cast<int>(i)) {
        detail::fail(rep.disjoint, "link " + std::to_string(w) + " carries value in pairs " +
                                       std::to_string(owner_link[w]) + " and " + std::to_string(i));
      }
      owner_link[w] = static_cast<int>(i);
    }
  }

  for (std::size_t i = 0; i < res.pairs.size(); ++i) {
    const DecompPair& p = res.pairs[i];
    if (!p.beta_center) {
      detail::fail(rep.simple, "pair " + std::to_string(i) + " has no center");
      continue;
    }
    for (const auto& k : center_components(p.subtree, p.local_x, *p.beta_center)) {
      if (k.mass > params.alpha_thin) {
        detail::fail(rep.simple, "pair " + std::to_string(i) + ": component at edge " + std::to_string(k.connector) +
                                     " has mass " + to_string(k.mass));
      }
      if (Rational(k.leaves) > params.beta) {
        detail::fail(rep.simple, "pair " + std::to_string(i) + ": component at edge " + std::to_string(k.connector) +
                                     " has " + std::to_string(k.leaves) + " leaves");
      }
    }
  }

  rep.pairs_bound_loose = (1 + eps) * res.cost_x;
  rep.pairs_bound_explicit = (1 + eps / (2 - eps)) * res.cost_x;
  if (res.cost_pairs > rep.pairs_bound_explicit) {
    detail::fail(rep.cost_increase, "sum c.x^i = " + to_string(res.cost_pairs) + " exceeds " +
                                        to_string(rep.pairs_bound_explicit));
  }
  if (res.cost_pairs > rep.pairs_bound_loose) {
    detail::fail(rep.cost_increase, "sum c.x^i = " + to_string(res.cost_pairs) + " exceeds " +
                                        to_string(rep.pairs_bound_loose));
  }

  rep.heavy_bound = eps * res.cost_x;
  rep.split_bound = eps * eps / 4 * res.cost_pairs;
  if (!covers(res.working, res.heavy_cover, res.heavy_edges)) detail::fail(rep.cheap_covers, "L^h misses a heavy edge");
  if (!covers(res.working, res.split_cover, res.split_edges)) detail::fail(rep.cheap_covers, "L^s misses a split edge");
  if (res.cost_heavy > rep.heavy_bound) {
    detail::fail(rep.cheap_covers, "c(L^h) = " + to_string(res.cost_heavy) + " exceeds " + to_string(rep.heavy_bound));
  }
  if (res.cost_split > rep.split_bound) {
    detail::fail(rep.cheap_covers, "c(L^s) = " + to_string(res.cost_split) + " exceeds " + to_string(rep.split_bound));
  }
  return rep;
}

}  // namespace wtap

#endif  // WTAP_DECOMPOSITION_HPP
