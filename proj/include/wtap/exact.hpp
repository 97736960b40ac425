#ifndef WTAP_EXACT_HPP
#define WTAP_EXACT_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtap/instance.hpp"
#include "wtap/lp.hpp"
#include "wtap/odd_cut.hpp"

namespace wtap {

struct ExactSolution {
  std::vector<LinkId> links;  // sorted
  Rational cost = 0;
};

namespace detail {

inline void require_coverable(const WtapInstance& inst) {
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (inst.edge_cover(e).empty()) {
      throw InfeasibleError("edge " + std::to_string(e) + " (" + std::to_string(inst.edge(e).u) + "," +
                            std::to_string(inst.edge(e).v) + ") is covered by no link");
    }
  }
}

// Branches on the uncovered edge with the fewest candidate links; after
// trying link k the later branches exclude it, so every cover is visited
// at most once.
class CoverSearch {
 public:
  explicit CoverSearch(const WtapInstance& inst) : inst_(inst), count_(inst.edge_count(), 0),
                                                   banned_(inst.link_count(), 0) {}

  ExactSolution run() {
    dfs(0);
    ExactSolution out;
    out.links = best_;
    std::sort(out.links.begin(), out.links.end());
    out.cost = *best_cost_;
    return out;
  }

 private:
  void dfs(const Rational& cost) {
    if (best_cost_ && cost >= *best_cost_) return;
    EdgeId pick = -1;
    int fewest = 0;
    for (EdgeId e = 0; e < inst_.edge_count(); ++e) {
      if (count_[e] > 0) continue;
      int options = 0;
      for (LinkId l : inst_.edge_cover(e)) options += !banned_[l];
      if (options == 0) return;
      if (pick == -1 || options < fewest) {
        pick = e;
        fewest = options;
      }
    }
    if (pick == -1) {
      best_ = chosen_;
      best_cost_ = cost;
      return;
    }
    std::vector<LinkId> tried;
    for (LinkId l : inst_.edge_cover(pick)) {
      if (banned_[l]) continue;
      apply(l, +1);
      chosen_.push_back(l);
      dfs(cost + inst_.link(l).cost);
      chosen_.pop_back();
      apply(l, -1);
      banned_[l] = 1;
      tried.push_back(l);
    }
    for (LinkId l : tried) banned_[l] = 0;
  }

  void apply(LinkId l, int d) {
    for (EdgeId e : inst_.link_path(l)) count_[e] += d;
  }

  const WtapInstance& inst_;
  std::vector<int> count_;
  std::vector<char> banned_;
  std::vector<LinkId> chosen_;
  std::vector<LinkId> best_;
  std::optional<Rational> best_cost_;
};

inline ExactSolution from_columns(const WtapInstance& inst, const CutLp& lp, std::span<const Rational> values) {
  ExactSolution out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (values[j] > 0) out.links.push_back(lp.link_of_column[j]);
  }
  std::sort(out.links.begin(), out.links.end());
  out.cost = cost_of(inst, out.links);
  return out;
}

}  // namespace detail

// Exact optimum by branch and bound over covering links with odd-cut
// separation at every node.
inline ExactSolution solve_by_ilp(const WtapInstance& inst, int node_limit = 20000) {
  detail::require_coverable(inst);
  if (inst.edge_count() == 0) return {};
  CutLp lp = build_cut_lp(inst);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(inst)};
  IlpResult ilp = solve_ilp(lp.model, oracles, node_limit);
  return detail::from_columns(inst, lp, ilp.solution);
}

// Ground truth. Exhaustive cover search for small link sets, otherwise
// branch and bound.
inline ExactSolution brute_force_wtap(const WtapInstance& inst, int enumeration_limit = 60) {
  detail::require_coverable(inst);
  if (inst.edge_count() == 0) return {};
  // self-loops never help and parallel links are dominated by the cheapest
  std::map<std::pair<NodeId, NodeId>, LinkId> cheapest;
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& k = inst.link(l);
    if (k.is_self_loop()) continue;
    auto [it, fresh] = cheapest.emplace(std::minmax(k.u, k.v), l);
    if (!fresh && k.cost < inst.link(it->second).cost) it->second = l;
  }
  std::vector<LinkId> keep;
  for (const auto& [key, l] : cheapest) keep.push_back(l);
  std::sort(keep.begin(), keep.end());
  WtapInstance reduced = select_links(inst, keep);
  ExactSolution local = static_cast<int>(keep.size()) <= enumeration_limit ? detail::CoverSearch(reduced).run()
                                                                           : solve_by_ilp(reduced);
  ExactSolution out;
  for (LinkId l : local.links) out.links.push_back(keep[l]);
  std::sort(out.links.begin(), out.links.end());
  out.cost = local.cost;
  return out;
}

// Exact optimum on a tree with at most k leaves. The leaf bound only gates
// tractability; the solve itself is exact search.
inline ExactSolution solve_few_leaf(const WtapInstance& inst, int k) {
  const int leaves = static_cast<int>(inst.leaves().size());
  if (leaves > k) {
    throw InvalidArgument("tree has " + std::to_string(leaves) + " leaves, bound is " + std::to_string(k));
  }
  return brute_force_wtap(inst, 30);
}

struct UpCrossResult {
  ExactSolution solution;
  Rational lp_value = 0;
  bool lp_integral = false;  // cutting-plane loop ended at an integral vertex
  int bb_nodes = 0;
  int cuts = 0;
  LpModel final_model;       // covering rows plus every cut added
  LpOutcome final_outcome;   // optimum of final_model
};

inline void require_up_cross(const WtapInstance& inst, std::span<const LinkId> scope) {
  if (!inst.root()) throw StateError("up/cross solve needs a rooted instance");
  for (LinkId l : scope) {
    if (inst.link(l).is_self_loop()) continue;
    if (classify_link(inst, l) == LinkClass::InNotUp) {
      throw StateError("link " + std::to_string(l) + " (" + std::to_string(inst.link(l).u) + "," +
                       std::to_string(inst.link(l).v) + ") is neither up nor cross for root " +
                       std::to_string(*inst.root()));
    }
  }
}

// Odd-cut LP by cutting planes on up/cross links only. On such instances
// the odd-cut polytope is integral, so the optimum is an integer cover of
// the same value; if the loop stops at a fractional vertex, branch and
// bound with all accumulated cuts must close at the LP value.
inline UpCrossResult solve_up_cross_exact(const WtapInstance& inst,
                                          std::optional<std::vector<LinkId>> restrict_to = std::nullopt) {
  std::vector<LinkId> scope;
  if (restrict_to) {
    scope = *restrict_to;
    std::sort(scope.begin(), scope.end());
    scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
    for (LinkId l : scope) {
      if (l < 0 || l >= inst.link_count()) throw InvalidArgument("link " + std::to_string(l) + " not in instance");
    }
  } else {
    for (LinkId l = 0; l < inst.link_count(); ++l) scope.push_back(l);
  }
  require_up_cross(inst, scope);
  WtapInstance sub = select_links(inst, scope);
  detail::require_coverable(sub);

  UpCrossResult out;
  CutLp lp = build_cut_lp(sub);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(sub)};
  SeparationRun run = solve_with_separation(lp.model, oracles);
  if (run.outcome.status != LpStatus::Optimal) throw InfeasibleError("odd-cut LP is infeasible");
  out.lp_value = run.outcome.objective;
  out.cuts = static_cast<int>(run.added.size());
  out.final_model = lp.model;
  for (const auto& c : run.added) out.final_model.constraints.push_back(c);
  out.final_outcome = run.outcome;

  std::vector<Rational> values = run.outcome.solution;
  out.lp_integral = std::all_of(values.begin(), values.end(), [](const Rational& v) { return is_integral(v); });
  if (!out.lp_integral) {
    IlpResult ilp = solve_ilp(out.final_model, oracles);
    out.bb_nodes = ilp.nodes;
    if (ilp.objective != out.lp_value) {
      throw InternalError("up/cross integer optimum " + to_string(ilp.objective) + " differs from odd-cut LP value " +
                          to_string(out.lp_value));
    }
    values = ilp.solution;
  }
  ExactSolution local = detail::from_columns(sub, lp, values);
  for (LinkId l : local.links) out.solution.links.push_back(scope[l]);
  std::sort(out.solution.links.begin(), out.solution.links.end());
  out.solution.cost = cost_of(inst, out.solution.links);
  if (out.solution.cost != out.lp_value) {
    throw InternalError("up/cross cover cost " + to_string(out.solution.cost) + " differs from LP value " +
                        to_string(out.lp_value));
  }
  return out;
}

// Matrices from the integrality argument for up/cross instances. Rows of R
// and S are the non-root nodes; R is the incidence matrix of the tree with
// edges directed away from the root (+1 at the head, -1 at the tail).
struct BinetCertificate {
  std::vector<NodeId> row_nodes;
  std::vector<std::vector<long>> R;  // rows x edges
  std::vector<std::vector<long>> S;  // rows x links
  std::vector<std::vector<long>> A;  // edges x links
};

inline BinetCertificate build_binet_certificate(const WtapInstance& inst) {
  if (!inst.root()) throw StateError("binet certificate needs a rooted instance");
  const NodeId r = *inst.root();
  BinetCertificate cert;
  std::vector<int> row_of(inst.node_count(), -1);
  for (NodeId v = 0; v < inst.node_count(); ++v) {
    if (v == r) continue;
    row_of[v] = static_cast<int>(cert.row_nodes.size());
    cert.row_nodes.push_back(v);
  }
  const int rows = static_cast<int>(cert.row_nodes.size());
  cert.R.assign(rows, std::vector<long>(inst.edge_count(), 0));
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    NodeId head = inst.lower_end(e);
    NodeId tail = head == inst.edge(e).u ? inst.edge(e).v : inst.edge(e).u;
    cert.R[row_of[head]][e] += 1;
    if (tail != r) cert.R[row_of[tail]][e] -= 1;
  }
  cert.S.assign(rows, std::vector<long>(inst.link_count(), 0));
  cert.A.assign(inst.edge_count(), std::vector<long>(inst.link_count(), 0));
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    const Link& k = inst.link(l);
    for (EdgeId e : inst.link_path(l)) cert.A[e][l] = 1;
    if (k.is_self_loop()) continue;
    switch (classify_link(inst, l)) {
      case LinkClass::Up: {
        NodeId top = inst.lca(k.u, k.v);
        NodeId bottom = top == k.u ? k.v : k.u;
        cert.S[row_of[bottom]][l] += 1;
        if (top != r) cert.S[row_of[top]][l] -= 1;
        break;
      }
      case LinkClass::Cross:
        cert.S[row_of[k.u]][l] = 1;
        cert.S[row_of[k.v]][l] = 1;
        break;
      case LinkClass::InNotUp:
        break;  // no column exists; verification rejects the instance
    }
  }
  return cert;
}

namespace detail {

inline bool full_rank(const std::vector<std::vector<long>>& m) {
  const int n = static_cast<int>(m.size());
  std::vector<std::vector<Rational>> a(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(m[i].size()) != n) return false;
    for (long v : m[i]) a[i].push_back(Rational(v));
  }
  for (int c = 0; c < n; ++c) {
    int p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return false;
    std::swap(a[p], a[c]);
    for (int i = c + 1; i < n; ++i) {
      if (a[i][c] == 0) continue;
      Rational f = a[i][c] / a[c][c];
      for (int j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return true;
}

}  // namespace detail

struct BinetCheck {
  bool ok = false;
  std::string failure;
};

inline BinetCheck check_binet_certificate(const WtapInstance& inst, const BinetCertificate& cert) {
  BinetCheck res;
  auto fail = [&res](std::string why) {
    res.ok = false;
    res.failure = std::move(why);
    return res;
  };
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (!inst.link(l).is_self_loop() && classify_link(inst, l) == LinkClass::InNotUp) {
      return fail("link " + std::to_string(l) + " is neither up nor cross");
    }
  }
  const int rows = static_cast<int>(cert.row_nodes.size());
  if (!detail::full_rank(cert.R)) return fail("R is singular");
  for (int i = 0; i < rows; ++i) {
    for (LinkId l = 0; l < inst.link_count(); ++l) {
      long s = 0;
      for (EdgeId e = 0; e < inst.edge_count(); ++e) s += cert.R[i][e] * cert.A[e][l];
      if (s != cert.S[i][l]) {
        return fail("(R A)[" + std::to_string(cert.row_nodes[i]) + "][" + std::to_string(l) + "] = " +
                    std::to_string(s) + " but S has " + std::to_string(cert.S[i][l]));
      }
    }
  }
  auto column_weight = [&](const std::vector<std::vector<long>>& m, int j) {
    long w = 0;
    for (int i = 0; i < rows; ++i) w += std::abs(m[i][j]);
    return w;
  };
  for (LinkId l = 0; l < inst.link_count(); ++l) {
    if (column_weight(cert.S, l) > 2) return fail("S column " + std::to_string(l) + " has weight above 2");
  }
  for (EdgeId e = 0; e < inst.edge_count(); ++e) {
    if (column_weight(cert.R, e) > 2) return fail("R column " + std::to_string(e) + " has weight above 2");
  }
  res.ok = true;
  return res;
}

inline bool verify_binet_certificate(const WtapInstance& inst) {
  return check_binet_certificate(inst, build_binet_certificate(inst)).ok;
}

}  // namespace wtap

#endif  // WTAP_EXACT_HPP
