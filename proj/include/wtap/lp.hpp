#ifndef WTAP_LP_HPP
#define WTAP_LP_HPP

#include <algorithm>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wtap/errors.hpp"
#include "wtap/rational.hpp"

namespace wtap {

enum class ConstraintTag { Covering, OddCut, Bundle, Branching };

inline const char* to_string(ConstraintTag t) {
  switch (t) {
    case ConstraintTag::Covering: return "covering";
    case ConstraintTag::OddCut: return "odd-cut";
    case ConstraintTag::Bundle: return "bundle";
    case ConstraintTag::Branching: return "branching";
  }
  return "?";
}

// sum_j coefficients[j].second * x_{coefficients[j].first} >= rhs
struct LinearConstraint {
  std::vector<std::pair<int, Rational>> coefficients;
  Rational rhs = 0;
  ConstraintTag tag = ConstraintTag::Covering;
  std::string label;

  Rational lhs(std::span<const Rational> x) const {
    Rational s = 0;
    for (const auto& [j, a] : coefficients) s += a * x[j];
    return s;
  }
  // rhs - lhs; positive means violated.
  Rational violation(std::span<const Rational> x) const { return rhs - lhs(x); }
};

// min objective^T x  s.t.  constraints,  x >= 0
struct LpModel {
  std::vector<Rational> objective;
  std::vector<LinearConstraint> constraints;

  int variable_count() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Rational> solution;
  Rational objective = 0;
  std::vector<Rational> duals;  // one per constraint, in model order
  std::vector<int> basis;       // basic column per row; columns >= n are slacks
};

// Given the current point, returns a violated constraint or nothing.
using SeparationOracle = std::function<std::optional<LinearConstraint>(std::span<const Rational>)>;

// Dense-tableau dual simplex over the rationals. Every row is a >= row with
// its own surplus column; the all-surplus basis is dual feasible because the
// objective is nonnegative, so rows can be appended to a solved tableau and
// re-optimized from there. Bland's rule on both the leaving row (smallest
// basic column index) and the entering column (smallest index among min
// ratios) rules out cycling.
class DualSimplex {
 public:
  explicit DualSimplex(std::vector<Rational> objective) : n_(static_cast<int>(objective.size())) {
    for (const auto& c : objective) {
      if (c < 0) throw InternalError("negative objective coefficient; the LP could be unbounded");
    }
    objective_ = objective;
    reduced_ = std::move(objective);
  }

  int variable_count() const { return n_; }
  int row_count() const { return static_cast<int>(rows_.size()); }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }
  long pivots() const { return pivots_; }

  void add_row(LinearConstraint c) {
    for (const auto& [j, a] : c.coefficients) {
      if (j < 0 || j >= n_) throw InvalidArgument("constraint references unknown variable " + std::to_string(j));
    }
    const int slack = n_ + row_count();
    for (auto& row : rows_) row.emplace_back(0);
    reduced_.emplace_back(0);
    std::vector<Rational> row(slack + 1, Rational(0));
    for (const auto& [j, a] : c.coefficients) row[j] -= a;
    row[slack] = 1;
    Rational beta = -c.rhs;
    for (int i = 0; i < row_count(); ++i) {
      const int k = basis_[i];
      if (sgn(row[k]) == 0) continue;
      Rational f = row[k];
      const auto& src = rows_[i];
      for (int j = 0; j <= slack; ++j) {
        if (sgn(src[j]) != 0) row[j] -= f * src[j];
      }
      beta -= f * rhs_[i];
    }
    rows_.push_back(std::move(row));
    rhs_.push_back(std::move(beta));
    basis_.push_back(slack);
    constraints_.push_back(std::move(c));
  }

  LpStatus optimize(long pivot_limit = 1'000'000) {
    for (;;) {
      int leave = -1;
      for (int i = 0; i < row_count(); ++i) {
        if (sgn(rhs_[i]) < 0 && (leave == -1 || basis_[i] < basis_[leave])) leave = i;
      }
      if (leave == -1) {
        status_ = LpStatus::Optimal;
        return *status_;
      }
      const auto& row = rows_[leave];
      int enter = -1;
      Rational best;
      for (int j = 0; j < static_cast<int>(row.size()); ++j) {
        if (sgn(row[j]) >= 0) continue;
        Rational ratio = reduced_[j] / -row[j];
        if (enter == -1 || ratio < best) {
          enter = j;
          best = std::move(ratio);
        }
      }
      if (enter == -1) {
        status_ = LpStatus::Infeasible;
        return *status_;
      }
      if (++pivots_ > pivot_limit) throw ResourceError("dual simplex pivot limit exceeded");
      pivot(leave, enter);
    }
  }

  LpOutcome outcome() const {
    if (!status_) throw StateError("outcome requested before optimize()");
    LpOutcome out;
    out.status = *status_;
    if (*status_ != LpStatus::Optimal) return out;
    out.solution.assign(n_, Rational(0));
    for (int i = 0; i < row_count(); ++i) {
      if (basis_[i] < n_) out.solution[basis_[i]] = rhs_[i];
    }
    for (int j = 0; j < n_; ++j) out.objective += objective_[j] * out.solution[j];
    out.duals.resize(row_count());
    for (int i = 0; i < row_count(); ++i) out.duals[i] = reduced_[n_ + i];
    out.basis = basis_;
    return out;
  }

 private:
  void pivot(int r, int j) {
    auto& prow = rows_[r];
    const Rational piv = prow[j];
    std::vector<int> nz;
    for (int k = 0; k < static_cast<int>(prow.size()); ++k) {
      if (sgn(prow[k]) != 0) {
        prow[k] /= piv;
        nz.push_back(k);
      }
    }
    rhs_[r] /= piv;
    for (int i = 0; i < row_count(); ++i) {
      if (i == r || sgn(rows_[i][j]) == 0) continue;
      const Rational f = rows_[i][j];
      for (int k : nz) rows_[i][k] -= f * prow[k];
      rhs_[i] -= f * rhs_[r];
    }
    if (sgn(reduced_[j]) != 0) {
      const Rational f = reduced_[j];
      for (int k : nz) reduced_[k] -= f * prow[k];
    }
    basis_[r] = j;
  }

  int n_;
  std::vector<Rational> objective_;
  std::vector<Rational> reduced_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> rhs_;
  std::vector<int> basis_;
  std::vector<LinearConstraint> constraints_;
  std::optional<LpStatus> status_;
  long pivots_ = 0;
};

inline LpOutcome solve_lp(const LpModel& model) {
  DualSimplex simplex(model.objective);
  for (const auto& c : model.constraints) simplex.add_row(c);
  simplex.optimize();
  return simplex.outcome();
}

struct SeparationRun {
  LpOutcome outcome;
  std::vector<LinearConstraint> added;
  int rounds = 0;
};

// Runs one oracle sweep on the simplex's current optimum; returns the first
// violated cut, if any.
inline std::optional<LinearConstraint> first_violated(std::span<const SeparationOracle> oracles,
                                                      std::span<const Rational> x) {
  for (const auto& oracle : oracles) {
    if (auto cut = oracle(x)) {
      if (cut->violation(x) <= 0) {
        throw InternalError("oracle returned a constraint that is not violated: " + cut->label);
      }
      return cut;
    }
  }
  return std::nullopt;
}

// Cutting-plane loop on an existing simplex (warm start).
inline SeparationRun separate_loop(DualSimplex& simplex, std::span<const SeparationOracle> oracles,
                                   int max_rounds = 5000) {
  SeparationRun run;
  for (;;) {
    simplex.optimize();
    run.outcome = simplex.outcome();
    if (run.outcome.status != LpStatus::Optimal) return run;
    auto cut = first_violated(oracles, run.outcome.solution);
    if (!cut) return run;
    if (run.rounds >= max_rounds) {
      throw ResourceError("separation round limit " + std::to_string(max_rounds) + " exceeded; last cut: " +
                          cut->label);
    }
    ++run.rounds;
    run.added.push_back(*cut);
    simplex.add_row(std::move(*cut));
  }
}

inline SeparationRun solve_with_separation(const LpModel& model, std::span<const SeparationOracle> oracles,
                                           int max_rounds = 5000) {
  DualSimplex simplex(model.objective);
  for (const auto& c : model.constraints) simplex.add_row(c);
  return separate_loop(simplex, oracles, max_rounds);
}

struct IlpResult {
  std::vector<Rational> solution;
  Rational objective = 0;
  int nodes = 0;
  std::vector<LinearConstraint> cuts;  // globally valid cuts found on the way
};

// Best-first branch and bound; oracles are separated at every node and the
// cuts they return are shared with all open nodes. Branches on the
// fractional variable whose fractional part is closest to 1/2.
inline IlpResult solve_ilp(const LpModel& model, std::span<const SeparationOracle> oracles,
                           int node_limit = 20000) {
  struct Node {
    Rational bound;
    int id;
    DualSimplex simplex;
    std::size_t pool_seen;
  };
  auto worse = [](const std::unique_ptr<Node>& a, const std::unique_ptr<Node>& b) {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  };
  std::vector<std::unique_ptr<Node>> open;
  auto push = [&](std::unique_ptr<Node> node) {
    open.push_back(std::move(node));
    std::push_heap(open.begin(), open.end(), worse);
  };

  DualSimplex root(model.objective);
  for (const auto& c : model.constraints) root.add_row(c);
  int next_id = 0;
  push(std::make_unique<Node>(Node{Rational(0), next_id++, std::move(root), 0}));

  IlpResult result;
  std::optional<Rational> incumbent_value;
  std::vector<LinearConstraint> pool;
  const Rational half(1, 2);

  while (!open.empty()) {
    std::pop_heap(open.begin(), open.end(), worse);
    auto node = std::move(open.back());
    open.pop_back();
    if (incumbent_value && node->bound >= *incumbent_value) continue;
    if (++result.nodes > node_limit) throw ResourceError("branch-and-bound node limit exceeded");
    for (; node->pool_seen < pool.size(); ++node->pool_seen) node->simplex.add_row(pool[node->pool_seen]);
    auto run = separate_loop(node->simplex, oracles);
    for (auto& c : run.added) pool.push_back(std::move(c));
    node->pool_seen = pool.size();
    if (run.outcome.status != LpStatus::Optimal) continue;
    const auto& x = run.outcome.solution;
    if (incumbent_value && run.outcome.objective >= *incumbent_value) continue;
    int branch = -1;
    Rational branch_score;
    for (int j = 0; j < static_cast<int>(x.size()); ++j) {
      if (is_integral(x[j])) continue;
      Rational frac = x[j] - floor_of(x[j]);
      Rational score = abs(frac - half);
      if (branch == -1 || score < branch_score) {
        branch = j;
        branch_score = std::move(score);
      }
    }
    if (branch == -1) {
      incumbent_value = run.outcome.objective;
      result.solution = x;
      result.objective = run.outcome.objective;
      continue;
    }
    LinearConstraint down{{{branch, Rational(-1)}}, -floor_of(x[branch]), ConstraintTag::Branching,
                          "x" + std::to_string(branch) + " <= " + to_string(floor_of(x[branch]))};
    LinearConstraint up{{{branch, Rational(1)}}, ceil_of(x[branch]), ConstraintTag::Branching,
                        "x" + std::to_string(branch) + " >= " + to_string(ceil_of(x[branch]))};
    auto down_node = std::make_unique<Node>(Node{run.outcome.objective, next_id++, node->simplex, node->pool_seen});
    down_node->simplex.add_row(std::move(down));
    node->simplex.add_row(std::move(up));
    auto up_node = std::make_unique<Node>(
        Node{run.outcome.objective, next_id++, std::move(node->simplex), node->pool_seen});
    push(std::move(down_node));
    push(std::move(up_node));
  }
  if (!incumbent_value) throw InfeasibleError("integer program is infeasible");
  result.cuts = std::move(pool);
  return result;
}

// Independent optimality check: primal feasibility, dual feasibility,
// equal objectives and complementary slackness, all exact.
struct CertificateCheck {
  bool ok = true;
  std::string failure;
};

inline CertificateCheck check_certificate(const LpModel& model, const LpOutcome& out) {
  CertificateCheck res;
  auto fail = [&res](std::string why) {
    if (res.ok) {
      res.ok = false;
      res.failure = std::move(why);
    }
  };
  if (out.status != LpStatus::Optimal) {
    fail("outcome is not optimal");
    return res;
  }
  const int n = model.variable_count();
  const int m = static_cast<int>(model.constraints.size());
  if (static_cast<int>(out.solution.size()) != n || static_cast<int>(out.duals.size()) != m) {
    fail("certificate dimensions do not match the model");
    return res;
  }
  for (int j = 0; j < n; ++j) {
    if (out.solution[j] < 0) fail("x" + std::to_string(j) + " negative");
  }
  std::vector<Rational> aty(n, Rational(0));
  Rational dual_obj = 0, primal_obj = 0;
  for (int i = 0; i < m; ++i) {
    const auto& c = model.constraints[i];
    Rational slack = c.lhs(out.solution) - c.rhs;
    if (slack < 0) fail("row " + std::to_string(i) + " (" + c.label + ") violated");
    if (out.duals[i] < 0) fail("dual " + std::to_string(i) + " negative");
    if (out.duals[i] != 0 && slack != 0) fail("complementary slackness fails on row " + std::to_string(i));
    for (const auto& [j, a] : c.coefficients) aty[j] += a * out.duals[i];
    dual_obj += c.rhs * out.duals[i];
  }
  for (int j = 0; j < n; ++j) {
    Rational red = model.objective[j] - aty[j];
    if (red < 0) fail("dual constraint for x" + std::to_string(j) + " violated");
    if (out.solution[j] != 0 && red != 0) fail("complementary slackness fails on x" + std::to_string(j));
    primal_obj += model.objective[j] * out.solution[j];
  }
  if (primal_obj != out.objective) fail("reported objective differs from c^T x");
  if (primal_obj != dual_obj) fail("primal objective " + to_string(primal_obj) + " != dual " + to_string(dual_obj));
  return res;
}

// Human-readable dump, one row per line.
inline std::string dump_model(const LpModel& model) {
  std::ostringstream os;
  os << "min";
  for (int j = 0; j < model.variable_count(); ++j) os << " + " << to_string(model.objective[j]) << " x" << j;
  os << "\n";
  for (const auto& c : model.constraints) {
    os << "[" << to_string(c.tag) << "]";
    for (const auto& [j, a] : c.coefficients) os << " + " << to_string(a) << " x" << j;
    os << " >= " << to_string(c.rhs);
    if (!c.label.empty()) os << "   ; " << c.label;
    os << "\n";
  }
  return os.str();
}

}  // namespace wtap

#endif  // WTAP_LP_HPP
