#ifndef WTAP_INSTANCE_HPP
#define WTAP_INSTANCE_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wtap/errors.hpp"
#include "wtap/rational.hpp"

namespace wtap {

using NodeId = int;
using EdgeId = int;
using LinkId = int;

inline constexpr NodeId kNoNode = -1;

struct TreeEdge {
  NodeId u = kNoNode;
  NodeId v = kNoNode;
};

struct Link {
  NodeId u = kNoNode;
  NodeId v = kNoNode;
  Rational cost = 1;
  // Link of the pre-closure instance this one stands in for (set by
  // shadow_complete; carried through contraction and restriction).
  std::optional<LinkId> origin;

  bool is_self_loop() const { return u == v; }
};

enum class LinkClass { Up, Cross, InNotUp };

inline const char* to_string(LinkClass c) {
  switch (c) {
    case LinkClass::Up: return "up";
    case LinkClass::Cross: return "cross";
    case LinkClass::InNotUp: return "in";
  }
  return "?";
}

// Ties an instance to the ancestor it was derived from by contraction or
// restriction. All maps point at the ancestor, never at an intermediate.
struct Lineage {
  std::uint64_t id = 0;
  std::vector<NodeId> node_image;   // ancestor node -> node here, or kNoNode
  std::vector<EdgeId> edge_source;  // edge here -> ancestor edge
  std::vector<LinkId> link_source;  // link here -> ancestor link

  bool is_root() const {
    for (std::size_t i = 0; i < node_image.size(); ++i) {
      if (node_image[i] != static_cast<NodeId>(i)) return false;
    }
    for (std::size_t i = 0; i < edge_source.size(); ++i) {
      if (edge_source[i] != static_cast<EdgeId>(i)) return false;
    }
    return true;
  }
};

// Tree plus links, immutable once built. Path and cover lists are
// precomputed because every solver queries them repeatedly.
class WtapInstance {
 public:
  // single node, no links
  WtapInstance() : WtapInstance(1, {}, {}, std::nullopt) {
    lineage_.node_image = {0};
    lineage_.id = digest();
  }

  static WtapInstance create(int node_count, std::vector<TreeEdge> edges, std::vector<Link> links,
                             std::optional<NodeId> root = std::nullopt) {
    WtapInstance inst(node_count, std::move(edges), std::move(links), root);
    inst.lineage_.id = inst.digest();
    inst.lineage_.node_image.resize(node_count);
    std::iota(inst.lineage_.node_image.begin(), inst.lineage_.node_image.end(), 0);
    inst.lineage_.edge_source.resize(inst.edges_.size());
    std::iota(inst.lineage_.edge_source.begin(), inst.lineage_.edge_source.end(), 0);
    inst.lineage_.link_source.resize(inst.links_.size());
    std::iota(inst.lineage_.link_source.begin(), inst.lineage_.link_source.end(), 0);
    return inst;
  }

  // Builds a descendant of `parent`. The three maps are relative to the
  // parent and get composed with the parent's own lineage.
  static WtapInstance derive(const WtapInstance& parent, int node_count, std::vector<TreeEdge> edges,
                             std::vector<Link> links, std::optional<NodeId> root,
                             std::span<const NodeId> node_image_from_parent,
                             std::span<const EdgeId> edge_from_parent,
                             std::span<const LinkId> link_from_parent) {
    WtapInstance inst(node_count, std::move(edges), std::move(links), root);
    const Lineage& pl = parent.lineage_;
    inst.lineage_.id = pl.id;
    inst.lineage_.node_image.resize(pl.node_image.size(), kNoNode);
    for (std::size_t a = 0; a < pl.node_image.size(); ++a) {
      NodeId mid = pl.node_image[a];
      if (mid != kNoNode) inst.lineage_.node_image[a] = node_image_from_parent[mid];
    }
    for (EdgeId e : edge_from_parent) inst.lineage_.edge_source.push_back(pl.edge_source[e]);
    for (LinkId l : link_from_parent) inst.lineage_.link_source.push_back(pl.link_source[l]);
    return inst;
  }

  int node_count() const { return node_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int link_count() const { return static_cast<int>(links_.size()); }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<Link>& links() const { return links_; }
  const TreeEdge& edge(EdgeId e) const { return edges_.at(e); }
  const Link& link(LinkId l) const { return links_.at(l); }
  std::optional<NodeId> root() const { return root_; }
  const Lineage& lineage() const { return lineage_; }

  // max(1, largest link cost); equals M for normalized instances.
  Rational cost_bound() const {
    Rational m = 1;
    for (const auto& l : links_) m = std::max(m, l.cost);
    return m;
  }

  bool has_node(NodeId v) const { return v >= 0 && v < node_count_; }

  // Index rooted at root() when present, node 0 otherwise.
  NodeId anchor() const { return anchor_; }
  NodeId parent(NodeId v) const { return parent_[v]; }
  EdgeId parent_edge(NodeId v) const { return parent_edge_[v]; }
  int depth(NodeId v) const { return depth_[v]; }
  int degree(NodeId v) const { return static_cast<int>(adjacency_[v].size()); }
  const std::vector<std::pair<NodeId, EdgeId>>& neighbors(NodeId v) const { return adjacency_[v]; }
  // Endpoint of e farther from the anchor.
  NodeId lower_end(EdgeId e) const {
    const auto& ed = edges_[e];
    return parent_edge_[ed.u] == e ? ed.u : ed.v;
  }
  // True iff v lies in the anchor-rooted subtree below `top`.
  bool in_subtree(NodeId v, NodeId top) const { return tin_[top] <= tin_[v] && tout_[v] <= tout_[top]; }

  NodeId lca(NodeId a, NodeId b) const {
    check_node(a);
    check_node(b);
    while (depth_[a] > depth_[b]) a = parent_[a];
    while (depth_[b] > depth_[a]) b = parent_[b];
    while (a != b) {
      a = parent_[a];
      b = parent_[b];
    }
    return a;
  }

  // Sorted edge ids of the unique a-b path.
  std::vector<EdgeId> path(NodeId a, NodeId b) const {
    check_node(a);
    check_node(b);
    std::vector<EdgeId> out;
    while (depth_[a] > depth_[b]) {
      out.push_back(parent_edge_[a]);
      a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
      out.push_back(parent_edge_[b]);
      b = parent_[b];
    }
    while (a != b) {
      out.push_back(parent_edge_[a]);
      out.push_back(parent_edge_[b]);
      a = parent_[a];
      b = parent_[b];
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  // Nodes of the a-b path in walking order, a first.
  std::vector<NodeId> path_nodes(NodeId a, NodeId b) const {
    std::vector<NodeId> front, back;
    while (depth_[a] > depth_[b]) {
      front.push_back(a);
      a = parent_[a];
    }
    while (depth_[b] > depth_[a]) {
      back.push_back(b);
      b = parent_[b];
    }
    while (a != b) {
      front.push_back(a);
      back.push_back(b);
      a = parent_[a];
      b = parent_[b];
    }
    front.push_back(a);
    front.insert(front.end(), back.rbegin(), back.rend());
    return front;
  }

  const std::vector<EdgeId>& link_path(LinkId l) const { return link_paths_.at(l); }
  const std::vector<LinkId>& edge_cover(EdgeId e) const { return edge_covers_.at(e); }

  std::vector<NodeId> leaves() const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < node_count_; ++v) {
      if (degree(v) == 1) out.push_back(v);
    }
    return out;
  }

  // Node set of the component of G - e that contains `side`.
  std::vector<char> side_of(EdgeId e, NodeId side) const {
    NodeId low = lower_end(e);
    bool want_below = in_subtree(side, low);
    std::vector<char> mark(node_count_, 0);
    for (NodeId v = 0; v < node_count_; ++v) mark[v] = in_subtree(v, low) == want_below ? 1 : 0;
    return mark;
  }

  void check_node(NodeId v) const {
    if (!has_node(v)) throw InvalidArgument("node " + std::to_string(v) + " not in instance");
  }

  std::uint64_t digest() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t x) {
      for (int i = 0; i < 8; ++i) {
        h ^= (x >> (8 * i)) & 0xff;
        h *= 1099511628211ull;
      }
    };
    mix(static_cast<std::uint64_t>(node_count_));
    for (const auto& e : edges_) {
      mix(static_cast<std::uint64_t>(e.u));
      mix(static_cast<std::uint64_t>(e.v));
    }
    for (const auto& l : links_) {
      mix(static_cast<std::uint64_t>(l.u));
      mix(static_cast<std::uint64_t>(l.v));
      for (char c : to_string(l.cost)) mix(static_cast<unsigned char>(c));
    }
    mix(root_ ? static_cast<std::uint64_t>(*root_) : ~0ull);
    return h;
  }

 private:
  WtapInstance(int node_count, std::vector<TreeEdge> edges, std::vector<Link> links, std::optional<NodeId> root)
      : node_count_(node_count), edges_(std::move(edges)), links_(std::move(links)), root_(root) {
    if (node_count_ < 1) throw InvalidArgument("instance needs at least one node");
    if (static_cast<int>(edges_.size()) != node_count_ - 1) {
      throw InvalidArgument("tree on " + std::to_string(node_count_) + " nodes needs " +
                            std::to_string(node_count_ - 1) + " edges, got " + std::to_string(edges_.size()));
    }
    if (root_) check_node(*root_);
    adjacency_.assign(node_count_, {});
    for (EdgeId e = 0; e < edge_count(); ++e) {
      const auto& ed = edges_[e];
      check_node(ed.u);
      check_node(ed.v);
      if (ed.u == ed.v) throw InvalidArgument("tree edge " + std::to_string(e) + " is a loop");
      adjacency_[ed.u].push_back({ed.v, e});
      adjacency_[ed.v].push_back({ed.u, e});
    }
    for (LinkId l = 0; l < link_count(); ++l) {
      check_node(links_[l].u);
      check_node(links_[l].v);
      if (links_[l].cost < 0) throw InvalidArgument("link " + std::to_string(l) + " has negative cost");
    }
    build_index();
  }

  void build_index() {
    anchor_ = root_.value_or(0);
    parent_.assign(node_count_, kNoNode);
    parent_edge_.assign(node_count_, -1);
    depth_.assign(node_count_, 0);
    tin_.assign(node_count_, -1);
    tout_.assign(node_count_, -1);
    // iterative DFS for Euler intervals
    std::vector<std::pair<NodeId, std::size_t>> stack{{anchor_, 0}};
    int clock = 0;
    tin_[anchor_] = clock++;
    int seen = 1;
    while (!stack.empty()) {
      auto& [v, next] = stack.back();
      if (next < adjacency_[v].size()) {
        auto [w, e] = adjacency_[v][next++];
        if (w == parent_[v] && e == parent_edge_[v]) continue;
        if (tin_[w] != -1) throw InvalidArgument("tree edges contain a cycle");
        parent_[w] = v;
        parent_edge_[w] = e;
        depth_[w] = depth_[v] + 1;
        tin_[w] = clock++;
        ++seen;
        stack.push_back({w, 0});
      } else {
        tout_[v] = clock++;
        stack.pop_back();
      }
    }
    if (seen != node_count_) throw InvalidArgument("tree edges do not connect all nodes");
    link_paths_.resize(links_.size());
    edge_covers_.assign(edges_.size(), {});
    for (LinkId l = 0; l < link_count(); ++l) {
      link_paths_[l] = path(links_[l].u, links_[l].v);
      for (EdgeId e : link_paths_[l]) edge_covers_[e].push_back(l);
    }
  }

  int node_count_;
  std::vector<TreeEdge> edges_;
  std::vector<Link> links_;
  std::optional<NodeId> root_;
  Lineage lineage_;

  NodeId anchor_ = 0;
  std::vector<std::vector<std::pair<NodeId, EdgeId>>> adjacency_;
  std::vector<NodeId> parent_;
  std::vector<EdgeId> parent_edge_;
  std::vector<int> depth_;
  std::vector<int> tin_, tout_;
  std::vector<std::vector<EdgeId>> link_paths_;
  std::vector<std::vector<LinkId>> edge_covers_;
};

// Nonnegative rational value per link of one instance (indexed by LinkId).
struct FractionalSolution {
  std::vector<Rational> values;

  FractionalSolution() = default;
  explicit FractionalSolution(int link_count) : values(link_count, Rational(0)) {}
  explicit FractionalSolution(std::vector<Rational> v) : values(std::move(v)) {}

  const Rational& operator[](LinkId l) const { return values[l]; }
  Rational& operator[](LinkId l) { return values[l]; }
  int size() const { return static_cast<int>(values.size()); }

  bool is_integral() const {
    return std::all_of(values.begin(), values.end(), [](const Rational& r) { return wtap::is_integral(r); });
  }
  std::vector<LinkId> support() const {
    std::vector<LinkId> s;
    for (LinkId l = 0; l < size(); ++l) {
      if (values[l] > 0) s.push_back(l);
    }
    return s;
  }
};

inline void check_solution(const WtapInstance& inst, const FractionalSolution& x) {
  if (x.size() != inst.link_count()) throw InvalidArgument("solution size does not match link count");
  for (const auto& v : x.values) {
    if (v < 0) throw InvalidArgument("fractional solution has a negative entry");
  }
}

// x(cov(e))
inline Rational coverage(const WtapInstance& inst, const FractionalSolution& x, EdgeId e) {
  Rational s = 0;
  for (LinkId l : inst.edge_cover(e)) s += x[l];
  return s;
}

// c^T x
inline Rational cost_of(const WtapInstance& inst, const FractionalSolution& x) {
  Rational s = 0;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (x[l] != 0) s += inst.link(l).cost * x[l];
  }
  return s;
}

inline Rational cost_of(const WtapInstance& inst, std::span<const LinkId> chosen) {
  Rational s = 0;
  for (LinkId l : chosen) s += inst.link(l).cost;
  return s;
}

// ---------------------------------------------------------------------------
// Paths, covering and feasibility

inline std::vector<EdgeId> tree_path(const WtapInstance& inst, NodeId u, NodeId v) { return inst.path(u, v); }

inline std::vector<EdgeId> tree_path(const WtapInstance& inst, const Link& link) {
  return inst.path(link.u, link.v);
}

// cov(F): links whose path meets F, sorted.
inline std::vector<LinkId> cover_set(const WtapInstance& inst, std::span<const EdgeId> edges) {
  std::vector<char> hit(inst.link_count(), 0);
  for (EdgeId e : edges) {
    if (e < 0 || e >= inst.edge_count()) throw InvalidArgument("edge " + std::to_string(e) + " not in instance");
    for (LinkId l : inst.edge_cover(e)) hit[l] = 1;
  }
  std::vector<LinkId> out;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (hit[l]) out.push_back(l);
  }
  return out;
}

inline std::vector<char> covered_edges(const WtapInstance& inst, std::span<const LinkId> chosen) {
  std::vector<char> covered(inst.edge_count(), 0);
  for (LinkId l : chosen) {
    for (EdgeId e : inst.link_path(l)) covered[e] = 1;
  }
  return covered;
}

inline bool covers(const WtapInstance& inst, std::span<const LinkId> chosen, std::span<const EdgeId> edges) {
  auto covered = covered_edges(inst, chosen);
  return std::all_of(edges.begin(), edges.end(), [&](EdgeId e) { return covered[e] != 0; });
}

inline bool is_feasible(const WtapInstance& inst, std::span<const LinkId> chosen) {
  for (LinkId l : chosen) {
    if (l < 0 || l >= inst.link_count()) throw InvalidArgument("link " + std::to_string(l) + " not in instance");
  }
  auto covered = covered_edges(inst, chosen);
  return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

// ---------------------------------------------------------------------------
// Rooted classification

inline LinkClass classify_link(const WtapInstance& inst, LinkId l) {
  if (!inst.root()) throw StateError("link classification needs a rooted instance");
  const Link& link = inst.link(l);
  NodeId w = inst.lca(link.u, link.v);
  if (w == link.u || w == link.v) return LinkClass::Up;
  if (w == *inst.root()) return LinkClass::Cross;
  return LinkClass::InNotUp;
}

struct SplitSolution {
  FractionalSolution in;
  FractionalSolution cross;
};

inline SplitSolution split_solution(const WtapInstance& inst, const FractionalSolution& x) {
  if (!inst.root()) throw StateError("splitting x needs a rooted instance");
  check_solution(inst, x);
  SplitSolution out{FractionalSolution(inst.link_count()), FractionalSolution(inst.link_count())};
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (classify_link(inst, l) == LinkClass::Cross) {
      out.cross[l] = x[l];
    } else {
      out.in[l] = x[l];
    }
  }
  return out;
}

inline WtapInstance with_root(const WtapInstance& inst, NodeId root) {
  inst.check_node(root);
  std::vector<NodeId> nodes(inst.node_count());
  std::iota(nodes.begin(), nodes.end(), 0);
  std::vector<EdgeId> edges(inst.edge_count());
  std::iota(edges.begin(), edges.end(), 0);
  std::vector<LinkId> links(inst.link_count());
  std::iota(links.begin(), links.end(), 0);
  return WtapInstance::derive(inst, inst.node_count(), inst.edges(), inst.links(), root, nodes, edges, links);
}

// Same tree, only the listed links (in the given order).
inline WtapInstance select_links(const WtapInstance& inst, std::span<const LinkId> keep) {
  std::vector<NodeId> nodes(inst.node_count());
  std::iota(nodes.begin(), nodes.end(), 0);
  std::vector<EdgeId> edges(inst.edge_count());
  std::iota(edges.begin(), edges.end(), 0);
  std::vector<Link> links;
  for (LinkId l : keep) links.push_back(inst.link(l));
  return WtapInstance::derive(inst, inst.node_count(), inst.edges(), std::move(links), inst.root(), nodes, edges,
                              keep);
}

// ---------------------------------------------------------------------------
// Shadows

// Adds every missing shadow pq of every link and reprices each pair to the
// cheapest link whose path contains it. Parallel links collapse to one per
// endpoint pair. `origin` of each output link names the cheapest input link
// it shadows (lowest index on ties). Self-loops are carried over unchanged.
inline WtapInstance shadow_complete(const WtapInstance& inst) {
  struct Best {
    Rational cost;
    LinkId origin;
  };
  std::map<std::pair<NodeId, NodeId>, Best> best;
  std::vector<Link> loops;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& link = inst.link(l);
    if (link.is_self_loop()) {
      loops.push_back(Link{link.u, link.v, link.cost, l});
      continue;
    }
    auto nodes = inst.path_nodes(link.u, link.v);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        auto key = std::minmax(nodes[i], nodes[j]);
        auto it = best.find(key);
        if (it == best.end()) {
          best.emplace(key, Best{link.cost, l});
        } else if (link.cost < it->second.cost || (link.cost == it->second.cost && l < it->second.origin)) {
          it->second = Best{link.cost, l};
        }
      }
    }
  }
  std::vector<Link> links;
  links.reserve(best.size() + loops.size());
  for (const auto& [key, b] : best) links.push_back(Link{key.first, key.second, b.cost, b.origin});
  for (auto& l : loops) links.push_back(std::move(l));
  return WtapInstance::create(inst.node_count(), inst.edges(), std::move(links), inst.root());
}

// ---------------------------------------------------------------------------
// Contraction

struct ContractionResult {
  WtapInstance instance;
  std::vector<NodeId> node_map;  // old node -> new node
};

// Each component of (V, edges) becomes one node, numbered by its smallest
// member. Links inside a component become self-loops and are kept.
inline ContractionResult contract(const WtapInstance& inst, std::span<const EdgeId> edges) {
  std::vector<NodeId> uf(inst.node_count());
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&uf](NodeId v) {
    while (uf[v] != v) {
      uf[v] = uf[uf[v]];
      v = uf[v];
    }
    return v;
  };
  std::vector<char> contracted(inst.edge_count(), 0);
  for (EdgeId e : edges) {
    if (e < 0 || e >= inst.edge_count()) throw InvalidArgument("edge " + std::to_string(e) + " not in instance");
    contracted[e] = 1;
    NodeId a = find(inst.edge(e).u), b = find(inst.edge(e).v);
    if (a != b) uf[std::max(a, b)] = std::min(a, b);
  }
  std::vector<NodeId> map(inst.node_count(), kNoNode);
  std::vector<NodeId> rep_id(inst.node_count(), kNoNode);
  int next = 0;
  for (NodeId v = 0; v < inst.node_count(); ++v) {
    NodeId r = find(v);
    if (rep_id[r] == kNoNode) rep_id[r] = next++;
    map[v] = rep_id[r];
  }
  std::vector<TreeEdge> new_edges;
  std::vector<EdgeId> edge_from;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (contracted[e]) continue;
    new_edges.push_back({map[inst.edge(e).u], map[inst.edge(e).v]});
    edge_from.push_back(e);
  }
  std::vector<Link> new_links;
  std::vector<LinkId> link_from;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& old = inst.link(l);
    new_links.push_back(Link{map[old.u], map[old.v], old.cost, old.origin});
    link_from.push_back(l);
  }
  std::optional<NodeId> root;
  if (inst.root()) root = map[*inst.root()];
  auto out = WtapInstance::derive(inst, next, std::move(new_edges), std::move(new_links), root, map, edge_from,
                                  link_from);
  return {std::move(out), std::move(map)};
}

// Sub-instance induced by a connected node set; keeps links with both
// endpoints inside (self-loops included). new ids follow increasing old ids.
struct RestrictionResult {
  WtapInstance instance;
  std::vector<NodeId> node_map;   // old node -> new node or kNoNode
  std::vector<LinkId> link_from;  // new link -> old link
};

inline RestrictionResult restrict_to_nodes(const WtapInstance& inst, std::span<const char> member,
                                           std::optional<NodeId> root = std::nullopt) {
  std::vector<NodeId> map(inst.node_count(), kNoNode);
  int next = 0;
  for (NodeId v = 0; v < inst.node_count(); ++v) {
    if (member[v]) map[v] = next++;
  }
  if (next == 0) throw InvalidArgument("empty node set");
  std::vector<TreeEdge> edges;
  std::vector<EdgeId> edge_from;
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    const auto& ed = inst.edge(e);
    if (member[ed.u] && member[ed.v]) {
      edges.push_back({map[ed.u], map[ed.v]});
      edge_from.push_back(e);
    }
  }
  std::vector<Link> links;
  std::vector<LinkId> link_from;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& old = inst.link(l);
    if (member[old.u] && member[old.v]) {
      links.push_back(Link{map[old.u], map[old.v], old.cost, old.origin});
      link_from.push_back(l);
    }
  }
  std::optional<NodeId> new_root;
  if (root) {
    if (!member[*root]) throw InvalidArgument("root outside restricted node set");
    new_root = map[*root];
  }
  auto out = WtapInstance::derive(inst, next, std::move(edges), std::move(links), new_root, map, edge_from,
                                  link_from);
  return {std::move(out), std::move(map), std::move(link_from)};
}

// ---------------------------------------------------------------------------
// Cost normalization

struct NormalizedInstance {
  WtapInstance instance;
  Rational scale;  // new cost = scale * old cost
};

inline NormalizedInstance normalize_costs(const WtapInstance& inst) {
  std::optional<Rational> cmin;
  for (const auto& l : inst.links()) {
    if (l.cost <= 0) {
      throw InvalidArgument("link cost must be positive (pre-select zero-cost links before solving)");
    }
    if (!cmin || l.cost < *cmin) cmin = l.cost;
  }
  Rational scale = cmin ? Rational(1 / *cmin) : Rational(1);
  std::vector<Link> links = inst.links();
  for (auto& l : links) l.cost *= scale;
  return {WtapInstance::create(inst.node_count(), inst.edges(), std::move(links), inst.root()), scale};
}

// Cheapest link with endpoints {a, b} (lowest index on ties), if any.
inline std::optional<LinkId> cheapest_link_between(const WtapInstance& inst, NodeId a, NodeId b) {
  std::optional<LinkId> best;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& k = inst.link(l);
    if ((k.u == a && k.v == b) || (k.u == b && k.v == a)) {
      if (!best || k.cost < inst.link(*best).cost) best = l;
    }
  }
  return best;
}

}  // namespace wtap

#endif  // WTAP_INSTANCE_HPP
