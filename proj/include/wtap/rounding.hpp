#ifndef WTAP_ROUNDING_HPP
#define WTAP_ROUNDING_HPP

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wtap/bundles.hpp"
#include "wtap/decomposition.hpp"
#include "wtap/exact.hpp"
#include "wtap/instance.hpp"
#include "wtap/lp.hpp"
#include "wtap/odd_cut.hpp"

namespace wtap {

enum class RoundingMethod { CrossHeavy, BundleBased, Combined };

inline const char* to_string(RoundingMethod m) {
  switch (m) {
    case RoundingMethod::CrossHeavy:
      return "cross-heavy";
    case RoundingMethod::BundleBased:
      return "bundle";
    case RoundingMethod::Combined:
      return "combined";
  }
  return "?";
}

// Bundle row asked for by the bundle rounding of one subtree.
struct BundleRowCheck {
  BundleConstraint row;  // working link ids
  Rational local_lhs;    // lhs at the pair's own solution
  bool holds = false;
};

struct RoundingOutcome {
  std::vector<LinkId> chosen;  // working link ids, sorted
  Rational cost = 0;
  RoundingMethod method = RoundingMethod::CrossHeavy;
  Rational certificate = 0;  // right-hand side of the bound this method proves
  Rational cost_in = 0;      // c.x_in of the pair w.r.t. the rounding root
  Rational cost_cross = 0;   // c.x_cr
  int contracted_nodes = 0;  // |V^h cap V[H]|
  std::vector<BundleRowCheck> rows;

  bool certified() const { return cost <= certificate; }
};

struct RoundingContext {
  const WtapInstance& working;
  const AlgorithmParams& params;
};

namespace detail {

inline std::vector<LinkId> to_working(const WtapInstance& sub, std::span<const LinkId> links) {
  std::vector<LinkId> out;
  for (LinkId l : links) out.push_back(sub.lineage().link_source[l]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

inline LinkId required_shadow(const WtapInstance& t, NodeId a, NodeId b) {
  auto s = cheapest_link_between(t, a, b);
  if (!s) {
    throw StateError("missing shadow link " + std::to_string(a) + "-" + std::to_string(b) +
                     "; the instance is not shadow-complete");
  }
  return *s;
}

}  // namespace detail

// Every in-link uv that is not an up-link is replaced by its up-shadows uw
// and wv (w = lca), which leaves only up- and cross-links; the odd-cut LP on
// that support is integral.
inline RoundingOutcome round_cross_heavy(const DecompPair& pair, NodeId root) {
  WtapInstance t = with_root(pair.subtree, root);
  const FractionalSolution& x = pair.local_x;
  RoundingOutcome out;
  out.method = RoundingMethod::CrossHeavy;
  SplitSolution parts = split_solution(t, x);
  out.cost_in = cost_of(t, parts.in);
  out.cost_cross = cost_of(t, parts.cross);
  out.contracted_nodes = contracted_node_count(t);
  out.certificate = 2 * out.cost_in + out.cost_cross;
  if (t.edge_count() == 0) return out;

  FractionalSolution y(t.link_count());
  for (LinkId l = 0; l < t.link_count(); ++l) {
    if (x[l] == 0 || t.link(l).is_self_loop()) continue;
    if (classify_link(t, l) != LinkClass::InNotUp) {
      y[l] += x[l];
      continue;
    }
    const Link& k = t.link(l);
    NodeId w = t.lca(k.u, k.v);
    y[detail::required_shadow(t, k.u, w)] += x[l];
    y[detail::required_shadow(t, w, k.v)] += x[l];
  }
  UpCrossResult r = solve_up_cross_exact(t, y.support());
  out.chosen = detail::to_working(t, r.solution.links);
  out.cost = r.solution.cost;
  return out;
}

// H-bar subtrees at the center: one per neighbor w, made of w's component,
// the connecting edge and the center.
inline std::vector<std::vector<EdgeId>> center_subtrees(const WtapInstance& t, NodeId center) {
  std::vector<std::vector<EdgeId>> out;
  for (const auto& [w, f] : t.neighbors(center)) {
    auto member = t.side_of(f, w);
    std::vector<EdgeId> edges;
    for (EdgeId e = 0; e < t.edge_count(); ++e) {
      if (e == f || (member[t.edge(e).u] && member[t.edge(e).v])) edges.push_back(e);
    }
    out.push_back(std::move(edges));
  }
  return out;
}

// Each subtree at the center is lifted to the working tree and solved
// exactly; its bundle row bounds that optimum by the pair's c-weighted
// coverage of the subtree. Cross-links count in two subtrees, in-links in
// one, hence c.x_in + 2 c.x_cr.
inline RoundingOutcome round_bundle(const DecompPair& pair, NodeId center, const RoundingContext& ctx) {
  WtapInstance t = with_root(pair.subtree, center);
  const FractionalSolution& x = pair.local_x;
  RoundingOutcome out;
  out.method = RoundingMethod::BundleBased;
  SplitSolution parts = split_solution(t, x);
  out.cost_in = cost_of(t, parts.in);
  out.cost_cross = cost_of(t, parts.cross);
  out.contracted_nodes = contracted_node_count(t);
  out.certificate = out.cost_in + 2 * out.cost_cross + out.contracted_nodes;
  if (t.edge_count() == 0) return out;

  FractionalSolution lifted = lift_solution(ctx.working, DecompPair{t, x, center});
  std::vector<LinkId> chosen;
  for (const auto& edges : center_subtrees(t, center)) {
    auto bundle = is_gamma_bundle(ctx.working, t, edges, ctx.params.gamma);
    if (!bundle) {
      throw InternalError("subtree with " + std::to_string(edges.size()) + " edges at center " +
                          std::to_string(center) + " is not a " + std::to_string(ctx.params.gamma) + "-bundle");
    }
    BundleSolution sol = bundle_solve(ctx.working, *bundle);
    BundleRowCheck check;
    check.row.rhs = sol.solution.cost;
    for (LinkId l : cover_set(ctx.working, bundle->edge_set)) {
      check.row.coefficients.push_back({l, ctx.working.link(l).cost});
    }
    check.row.bundle = std::move(*bundle);
    check.local_lhs = check.row.lhs(lifted);
    check.holds = check.local_lhs >= check.row.rhs;
    out.rows.push_back(std::move(check));
    chosen.insert(chosen.end(), sol.solution.links.begin(), sol.solution.links.end());
  }
  std::sort(chosen.begin(), chosen.end());
  chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  out.chosen = std::move(chosen);
  out.cost = cost_of(ctx.working, out.chosen);
  return out;
}

struct PairRounding {
  RoundingOutcome best;  // method Combined; chosen from the cheaper one
  RoundingOutcome cross_heavy;
  RoundingOutcome bundle;
  RoundingMethod winner = RoundingMethod::CrossHeavy;
};

// The cheaper of the two is at most their average:
// (3/2)(c.x_in + c.x_cr) + (1/2)|V^h cap V[H]|.
inline PairRounding round_pair(const DecompPair& pair, NodeId center, const RoundingContext& ctx) {
  PairRounding r;
  r.cross_heavy = round_cross_heavy(pair, center);
  r.bundle = round_bundle(pair, center, ctx);
  r.winner = r.bundle.cost < r.cross_heavy.cost ? RoundingMethod::BundleBased : RoundingMethod::CrossHeavy;
  const RoundingOutcome& w = r.winner == RoundingMethod::CrossHeavy ? r.cross_heavy : r.bundle;
  r.best.chosen = w.chosen;
  r.best.cost = w.cost;
  r.best.method = RoundingMethod::Combined;
  r.best.cost_in = r.cross_heavy.cost_in;
  r.best.cost_cross = r.cross_heavy.cost_cross;
  r.best.contracted_nodes = r.cross_heavy.contracted_nodes;
  r.best.certificate = Rational(3, 2) * (r.best.cost_in + r.best.cost_cross) + Rational(1, 2) * r.best.contracted_nodes;
  r.best.rows = r.bundle.rows;
  return r;
}

struct PairReport {
  RoundingMethod method = RoundingMethod::CrossHeavy;
  Rational cost = 0;
  Rational certificate = 0;
  Rational cross_heavy_cost = 0;
  Rational cross_heavy_certificate = 0;
  Rational bundle_cost = 0;
  Rational bundle_certificate = 0;
  bool rows_hold = true;
  int nodes = 0;
  int center = 0;
};

struct RunReport {
  std::uint64_t digest = 0;
  Rational lp_value = 0;           // in input cost units
  std::optional<Rational> opt_if_known;
  Rational output_cost = 0;
  std::optional<Rational> ratio;
  bool feasible = false;
  std::vector<PairReport> per_pair;
  int cuts_added = 0;
  int bundles_added = 0;
  int restarts = 0;
  bool restart_limit_hit = false;
  bool lp_certificate_ok = false;
  std::string lp_certificate_failure;
  // normalized units below
  Rational scale = 1;
  Rational cost_x = 0;
  Rational cost_pairs = 0;
  Rational cost_heavy = 0;
  Rational cost_split = 0;
  int heavy_edges = 0;
  int split_edges = 0;
  int contracted_nodes = 0;
  bool aggregate_ok = false;  // sum cost(S_i) <= |V^h| + (3/2) sum c.x^i
  std::map<std::string, double> timings_ms;

  bool all_certified() const {
    for (const auto& p : per_pair) {
      if (p.cost > p.certificate || p.cross_heavy_cost > p.cross_heavy_certificate) return false;
      if (p.rows_hold && p.bundle_cost > p.bundle_certificate) return false;
    }
    return aggregate_ok;
  }
};

struct ApproxResult {
  std::vector<LinkId> links;  // input link ids, sorted
  Rational cost = 0;
  RunReport report;
  DecompositionResult decomposition;
  std::vector<PairRounding> roundings;
  LpModel lp_model;  // final model (with all cuts), normalized working instance
  LpOutcome lp_outcome;
};

struct ApproxOptions {
  std::optional<Rational> epsilon;
  std::optional<Rational> cost_bound;
  std::optional<Rational> alpha_override;
  std::optional<Rational> heavy_override;
  std::optional<int> restart_limit;
};

// Params for a normalized instance; M defaults to its largest cost.
inline AlgorithmParams params_for(const WtapInstance& normalized, const ApproxOptions& opt) {
  Rational m = normalized.cost_bound();
  if (opt.cost_bound) {
    if (*opt.cost_bound < m) {
      throw InvalidArgument("cost bound M = " + to_string(*opt.cost_bound) + " is below the normalized maximum cost " +
                            to_string(m));
    }
    m = *opt.cost_bound;
  }
  AlgorithmParams p = AlgorithmParams::defaults(opt.epsilon.value_or(Rational(1, 2)), m);
  if (opt.alpha_override) p.alpha_thin = *opt.alpha_override;
  if (opt.heavy_override) p.heavy_threshold = *opt.heavy_override;
  if (opt.restart_limit) p.restart_limit = *opt.restart_limit;
  p.validate();
  return p;
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

}  // namespace detail

// Shadow closure, odd-cut LP with bundle rows by lazy separation,
// decomposition, per-pair rounding. A bundle row that a rounding needs and
// the LP solution violates is added to the LP and the pipeline restarts.
inline ApproxResult wtap_approx(const WtapInstance& input, const ApproxOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  ApproxResult res;
  res.report.digest = input.digest();
  for (EdgeId e = 0; e < input.edge_count(); ++e) {
    bool any = false;
    for (LinkId l : input.edge_cover(e)) any = any || !input.link(l).is_self_loop();
    if (!any) throw InfeasibleError("edge " + std::to_string(e) + " is covered by no link");
  }
  NormalizedInstance norm = normalize_costs(input);
  const WtapInstance working = shadow_complete(norm.instance);
  const AlgorithmParams params = params_for(norm.instance, opt);
  res.report.scale = norm.scale;
  res.report.timings_ms["prepare"] = detail::elapsed_ms(t0);

  CutLp base = build_cut_lp(working);
  std::vector<SeparationOracle> oracles{make_odd_cut_oracle(working)};
  std::vector<BundleConstraint> bundle_rows;
  const RoundingContext ctx{working, params};

  for (;;) {
    auto t_lp = clock::now();
    LpModel model = base.model;
    for (const auto& row : bundle_rows) model.constraints.push_back(to_linear(row, base.column_of_link));
    SeparationRun run = solve_with_separation(model, oracles);
    if (run.outcome.status != LpStatus::Optimal) throw InfeasibleError("odd-cut LP is infeasible");
    for (const auto& c : run.added) model.constraints.push_back(c);
    res.report.cuts_added += static_cast<int>(run.added.size());
    res.report.timings_ms["lp"] += detail::elapsed_ms(t_lp);
    FractionalSolution x = base.to_solution(run.outcome.solution, working.link_count());

    auto t_dec = clock::now();
    res.decomposition = decompose(working, x, params);
    res.report.timings_ms["decompose"] += detail::elapsed_ms(t_dec);

    auto t_round = clock::now();
    res.roundings.clear();
    std::vector<BundleConstraint> fresh;
    for (const auto& pair : res.decomposition.pairs) {
      res.roundings.push_back(round_pair(pair, *pair.beta_center, ctx));
      for (const auto& check : res.roundings.back().bundle.rows) {
        if (!check.holds && check.row.violation(x) > 0) fresh.push_back(check.row);
      }
    }
    res.report.timings_ms["round"] += detail::elapsed_ms(t_round);
    res.lp_model = std::move(model);
    res.lp_outcome = run.outcome;
    if (fresh.empty()) break;
    if (res.report.restarts >= params.restart_limit) {
      res.report.restart_limit_hit = true;
      break;
    }
    ++res.report.restarts;
    res.report.bundles_added += static_cast<int>(fresh.size());
    for (auto& row : fresh) bundle_rows.push_back(std::move(row));
  }

  const auto& dec = res.decomposition;
  CertificateCheck cert = check_certificate(res.lp_model, res.lp_outcome);
  res.report.lp_certificate_ok = cert.ok;
  res.report.lp_certificate_failure = cert.failure;

  std::vector<LinkId> chosen = dec.heavy_cover;
  chosen.insert(chosen.end(), dec.split_cover.begin(), dec.split_cover.end());
  Rational rounded_total = 0;
  for (std::size_t i = 0; i < res.roundings.size(); ++i) {
    const PairRounding& r = res.roundings[i];
    chosen.insert(chosen.end(), r.best.chosen.begin(), r.best.chosen.end());
    rounded_total += r.best.cost;
    PairReport pr;
    pr.method = r.winner;
    pr.cost = r.best.cost;
    pr.certificate = r.best.certificate;
    pr.cross_heavy_cost = r.cross_heavy.cost;
    pr.cross_heavy_certificate = r.cross_heavy.certificate;
    pr.bundle_cost = r.bundle.cost;
    pr.bundle_certificate = r.bundle.certificate;
    pr.rows_hold = std::all_of(r.bundle.rows.begin(), r.bundle.rows.end(), [](const auto& c) { return c.holds; });
    pr.nodes = dec.pairs[i].subtree.node_count();
    pr.center = *dec.pairs[i].beta_center;
    res.report.per_pair.push_back(pr);
  }
  res.report.aggregate_ok =
      rounded_total <= Rational(static_cast<long>(dec.contracted_nodes.size())) + Rational(3, 2) * dec.cost_pairs;

  // shadows go back to the input link they were cut from
  std::vector<LinkId> origins;
  for (LinkId l : chosen) origins.push_back(*working.link(l).origin);
  std::sort(origins.begin(), origins.end());
  origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
  res.links = std::move(origins);
  res.cost = cost_of(input, res.links);

  res.report.lp_value = res.lp_outcome.objective / norm.scale;
  res.report.output_cost = res.cost;
  res.report.feasible = is_feasible(input, res.links);
  res.report.cost_x = dec.cost_x;
  res.report.cost_pairs = dec.cost_pairs;
  res.report.cost_heavy = dec.cost_heavy;
  res.report.cost_split = dec.cost_split;
  res.report.heavy_edges = static_cast<int>(dec.heavy_edges.size());
  res.report.split_edges = static_cast<int>(dec.split_edges.size());
  res.report.contracted_nodes = static_cast<int>(dec.contracted_nodes.size());
  res.report.timings_ms["total"] = detail::elapsed_ms(t0);
  if (!res.report.feasible) throw InternalError("assembled link set does not cover the tree");
  return res;
}

}  // namespace wtap

#endif  // WTAP_ROUNDING_HPP
