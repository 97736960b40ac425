#ifndef WTAP_BUNDLES_HPP
#define WTAP_BUNDLES_HPP

#include <algorithm>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wtap/exact.hpp"
#include "wtap/instance.hpp"
#include "wtap/lp.hpp"

namespace wtap {

// Union of tree paths of the original instance.
struct Bundle {
  std::vector<std::pair<NodeId, NodeId>> paths;
  std::vector<EdgeId> edge_set;  // sorted union of the paths
};

inline Bundle make_bundle(const WtapInstance& inst, std::vector<std::pair<NodeId, NodeId>> paths) {
  Bundle b;
  std::vector<char> in(inst.edge_count(), 0);
  for (const auto& [p, q] : paths) {
    inst.check_node(p);
    inst.check_node(q);
    for (EdgeId e : inst.path(p, q)) in[e] = 1;
  }
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (in[e]) b.edge_set.push_back(e);
  }
  b.paths = std::move(paths);
  return b;
}

namespace detail {

// Splits a forest given by an edge mask into maximal paths whose inner
// nodes have degree 2.
inline std::vector<std::pair<NodeId, NodeId>> path_segments(const WtapInstance& inst, std::span<const char> in) {
  std::vector<int> deg(inst.node_count(), 0);
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (!in[e]) continue;
    ++deg[inst.edge(e).u];
    ++deg[inst.edge(e).v];
  }
  std::vector<char> used(inst.edge_count(), 0);
  std::vector<std::pair<NodeId, NodeId>> segments;
  for (NodeId s = 0; s < inst.node_count(); ++s) {
    if (deg[s] == 0 || deg[s] == 2) continue;
    for (const auto& [first, e0] : inst.neighbors(s)) {
      if (!in[e0] || used[e0]) continue;
      NodeId cur = first;
      EdgeId via = e0;
      used[via] = 1;
      while (deg[cur] == 2) {
        bool moved = false;
        for (const auto& [w, f] : inst.neighbors(cur)) {
          if (!in[f] || f == via) continue;
          cur = w;
          via = f;
          used[f] = 1;
          moved = true;
          break;
        }
        if (!moved) throw InternalError("path walk stuck");
      }
      segments.push_back(std::minmax(s, cur));
    }
  }
  std::sort(segments.begin(), segments.end());
  return segments;
}

}  // namespace detail

struct BundleSolution {
  ExactSolution solution;  // link ids of the instance B lives in
  WtapInstance contracted;
};

// OPT(B): contract everything outside B and solve exactly.
inline BundleSolution bundle_solve(const WtapInstance& inst, const Bundle& b) {
  std::vector<char> in(inst.edge_count(), 0);
  for (EdgeId e : b.edge_set) {
    if (e < 0 || e >= inst.edge_count()) throw InvalidArgument("bundle edge " + std::to_string(e) + " not in instance");
    in[e] = 1;
  }
  std::vector<EdgeId> outside;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (!in[e]) outside.push_back(e);
  }
  ContractionResult c = contract(inst, outside);
  const int leaf_bound = std::max<int>(2, static_cast<int>(2 * b.paths.size()));
  const int leaves = static_cast<int>(c.instance.leaves().size());
  ExactSolution sol = solve_few_leaf(c.instance, std::max(leaf_bound, leaves));
  return {std::move(sol), std::move(c.instance)};
}

inline Rational bundle_opt(const WtapInstance& inst, const Bundle& b) { return bundle_solve(inst, b).solution.cost; }

// sum_{l in cov(B)} c_l x_l >= OPT(B)
struct BundleConstraint {
  std::vector<std::pair<LinkId, Rational>> coefficients;
  Rational rhs;
  Bundle bundle;

  Rational lhs(const FractionalSolution& x) const {
    Rational s = 0;
    for (const auto& [l, c] : coefficients) s += c * x[l];
    return s;
  }
  Rational violation(const FractionalSolution& x) const { return rhs - lhs(x); }
};

inline BundleConstraint bundle_constraint(const WtapInstance& inst, const Bundle& b) {
  BundleConstraint row;
  row.rhs = bundle_opt(inst, b);
  for (LinkId l : cover_set(inst, b.edge_set)) row.coefficients.push_back({l, inst.link(l).cost});
  row.bundle = b;
  return row;
}

inline LinearConstraint to_linear(const BundleConstraint& row, std::span<const int> column_of_link) {
  LinearConstraint out;
  out.rhs = row.rhs;
  out.tag = ConstraintTag::Bundle;
  for (const auto& [l, c] : row.coefficients) {
    if (column_of_link[l] >= 0) out.coefficients.push_back({column_of_link[l], c});
  }
  out.label = "bundle " + std::to_string(row.bundle.paths.size()) + " paths, " +
              std::to_string(row.bundle.edge_set.size()) + " edges, OPT " + to_string(row.rhs);
  return out;
}

// Lifts edges of a descendant instance to the original tree and counts the
// maximal path segments of the lifted forest. Contracted edges break paths
// because they are absent from the lift.
inline std::optional<Bundle> is_gamma_bundle(const WtapInstance& original, const WtapInstance& descendant,
                                             std::span<const EdgeId> edges, int gamma) {
  const Lineage& lin = descendant.lineage();
  if (lin.id != original.lineage().id || static_cast<int>(lin.node_image.size()) != original.node_count() ||
      !original.lineage().is_root()) {
    throw InvalidArgument("instance is not a recorded descendant of the original");
  }
  std::vector<char> in(original.edge_count(), 0);
  for (EdgeId e : edges) {
    if (e < 0 || e >= descendant.edge_count()) throw InvalidArgument("edge " + std::to_string(e) + " not in descendant");
    in[lin.edge_source[e]] = 1;
  }
  auto segments = detail::path_segments(original, in);
  if (static_cast<int>(segments.size()) > gamma) return std::nullopt;
  return make_bundle(original, std::move(segments));
}

}  // namespace wtap

#endif  // WTAP_BUNDLES_HPP
