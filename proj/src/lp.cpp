#include "submodstab/lp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace submodstab::lp {
namespace {

// How an internal column z (0 <= z <= U) maps back to an original variable.
struct ColumnOrigin {
  enum Kind { kShift, kMirror, kSplitPos, kSplitNeg, kSlack, kArtificial } kind;
  std::size_t var = 0;   // original variable (structural kinds only)
  double offset = 0.0;   // x = offset + z (shift) or x = offset - z (mirror)
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), t_(rows * cols, 0.0), d_(cols, 0.0), upper_(cols, kInf),
        at_upper_(cols, false), basic_(cols, false), basis_(rows, 0), beta_(rows, 0.0) {}

  double& at(std::size_t i, std::size_t j) { return t_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return t_[i * cols_ + j]; }

  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> t_;
  std::vector<double> d_;  // reduced costs
  std::vector<double> upper_;
  std::vector<bool> at_upper_;
  std::vector<bool> basic_;
  std::vector<std::size_t> basis_;
  std::vector<double> beta_;  // current values of the basic variables

  // Reduced costs for cost vector c given the current basis.
  void price(const std::vector<double>& c) {
    for (std::size_t j = 0; j < cols_; ++j) d_[j] = c[j];
    for (std::size_t i = 0; i < rows_; ++i) {
      const double cb = c[basis_[i]];
      if (cb == 0.0) continue;
      const double* row = &t_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= cb * row[j];
    }
  }

  void pivot(std::size_t r, std::size_t e) {
    double* prow = &t_[r * cols_];
    const double inv = 1.0 / prow[e];
    for (std::size_t j = 0; j < cols_; ++j) prow[j] *= inv;
    prow[e] = 1.0;
    for (std::size_t i = 0; i < rows_; ++i) {
      if (i == r) continue;
      double* row = &t_[i * cols_];
      const double f = row[e];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols_; ++j) row[j] -= f * prow[j];
      row[e] = 0.0;
    }
    const double f = d_[e];
    if (f != 0.0) {
      for (std::size_t j = 0; j < cols_; ++j) d_[j] -= f * prow[j];
      d_[e] = 0.0;
    }
  }
};

enum class PhaseResult { kOptimal, kUnbounded };

// Runs Bland-rule iterations on the current reduced costs until optimal.
PhaseResult iterate(Tableau& tab, const SolverOptions& opt, Solution& sol) {
  const double ptol = opt.pivot_tolerance;
  const double ctol = opt.cost_tolerance;
  for (;;) {
    if (sol.pivots + sol.bound_flips > opt.max_iterations)
      throw std::runtime_error("simplex iteration limit exceeded");

    // Bland: lowest-index improving column.
    std::size_t enter = tab.cols_;
    int dir = 0;
    for (std::size_t j = 0; j < tab.cols_; ++j) {
      if (tab.basic_[j]) continue;
      if (!tab.at_upper_[j] && tab.d_[j] < -ctol && tab.upper_[j] > 0.0) {
        enter = j;
        dir = 1;
        break;
      }
      if (tab.at_upper_[j] && tab.d_[j] > ctol) {
        enter = j;
        dir = -1;
        break;
      }
    }
    if (enter == tab.cols_) return PhaseResult::kOptimal;

    double best = tab.upper_[enter];  // bound flip distance
    std::size_t leave = tab.rows_;
    bool leave_to_upper = false;
    for (std::size_t i = 0; i < tab.rows_; ++i) {
      const double alpha = dir * tab.at(i, enter);
      double step;
      bool to_upper;
      if (alpha > ptol) {
        step = std::max(0.0, tab.beta_[i]) / alpha;
        to_upper = false;
      } else if (alpha < -ptol && std::isfinite(tab.upper_[tab.basis_[i]])) {
        step = std::max(0.0, tab.upper_[tab.basis_[i]] - tab.beta_[i]) / -alpha;
        to_upper = true;
      } else {
        continue;
      }
      const double eps = 1e-12 * (1.0 + (std::isfinite(best) ? std::abs(best) : 0.0));
      const bool better = step < best - eps;
      const bool tie = !better && step <= best + eps && leave < tab.rows_ &&
                       tab.basis_[i] < tab.basis_[leave];
      if (better || tie) {
        best = step;
        leave = i;
        leave_to_upper = to_upper;
      }
    }
    if (!std::isfinite(best)) return PhaseResult::kUnbounded;

    if (leave == tab.rows_) {
      const double u = tab.upper_[enter];
      for (std::size_t i = 0; i < tab.rows_; ++i) tab.beta_[i] -= dir * u * tab.at(i, enter);
      tab.at_upper_[enter] = !tab.at_upper_[enter];
      ++sol.bound_flips;
      continue;
    }

    for (std::size_t i = 0; i < tab.rows_; ++i) tab.beta_[i] -= dir * best * tab.at(i, enter);
    const double entering_value = tab.at_upper_[enter] ? tab.upper_[enter] - best : best;
    const std::size_t leaving = tab.basis_[leave];
    tab.basic_[leaving] = false;
    tab.at_upper_[leaving] = leave_to_upper;
    tab.basic_[enter] = true;
    tab.at_upper_[enter] = false;
    tab.basis_[leave] = enter;
    tab.beta_[leave] = entering_value;
    tab.pivot(leave, enter);
    ++sol.pivots;
  }
}

}  // namespace

const char* status_name(Status status) {
  switch (status) {
    case Status::kOptimal: return "optimal";
    case Status::kInfeasible: return "infeasible";
    case Status::kUnbounded: return "unbounded";
  }
  return "?";
}

Solution solve(const LinearProgram& program, const SolverOptions& options) {
  const std::size_t nv = program.num_vars();
  const std::size_t m = program.constraints.size();
  std::vector<double> lower = program.lower.empty() ? std::vector<double>(nv, 0.0) : program.lower;
  std::vector<double> upper = program.upper.empty() ? std::vector<double>(nv, kInf) : program.upper;
  if (lower.size() != nv || upper.size() != nv)
    throw std::invalid_argument("bound vectors must match the number of variables");
  for (std::size_t j = 0; j < nv; ++j) {
    if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] ||
        lower[j] == kInf || upper[j] == -kInf)
      throw std::invalid_argument("invalid bounds on variable " + std::to_string(j));
    if (!std::isfinite(program.objective[j]))
      throw std::invalid_argument("objective coefficients must be finite");
  }
  for (const auto& c : program.constraints) {
    if (c.coeffs.size() != nv) throw std::invalid_argument("constraint width mismatch");
    if (!std::isfinite(c.rhs)) throw std::invalid_argument("constraint rhs must be finite");
    for (double a : c.coeffs)
      if (!std::isfinite(a)) throw std::invalid_argument("constraint coefficients must be finite");
  }

  // Internal columns: structural, then slacks, then artificials.
  std::vector<ColumnOrigin> origin;
  std::vector<double> col_upper;
  std::vector<double> cost;
  for (std::size_t j = 0; j < nv; ++j) {
    const double c = program.objective[j];
    if (std::isfinite(lower[j])) {
      origin.push_back({ColumnOrigin::kShift, j, lower[j]});
      col_upper.push_back(upper[j] - lower[j]);
      cost.push_back(c);
    } else if (std::isfinite(upper[j])) {
      origin.push_back({ColumnOrigin::kMirror, j, upper[j]});
      col_upper.push_back(kInf);
      cost.push_back(-c);
    } else {
      origin.push_back({ColumnOrigin::kSplitPos, j, 0.0});
      col_upper.push_back(kInf);
      cost.push_back(c);
      origin.push_back({ColumnOrigin::kSplitNeg, j, 0.0});
      col_upper.push_back(kInf);
      cost.push_back(-c);
    }
  }
  const std::size_t n_struct = origin.size();
  std::size_t n_slack = 0;
  for (const auto& c : program.constraints)
    if (c.relation != Relation::kEqual) ++n_slack;
  const std::size_t cols = n_struct + n_slack + m;

  Tableau tab(m, cols);
  std::vector<double> row_sign(m, 1.0);
  std::size_t slack_col = n_struct;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& con = program.constraints[i];
    double rhs = con.rhs;
    for (std::size_t k = 0; k < n_struct; ++k) {
      const ColumnOrigin& o = origin[k];
      const double a = con.coeffs[o.var];
      switch (o.kind) {
        case ColumnOrigin::kShift:
          tab.at(i, k) = a;
          rhs -= a * o.offset;
          break;
        case ColumnOrigin::kMirror:
          tab.at(i, k) = -a;
          rhs -= a * o.offset;
          break;
        case ColumnOrigin::kSplitPos: tab.at(i, k) = a; break;
        case ColumnOrigin::kSplitNeg: tab.at(i, k) = -a; break;
        default: break;
      }
    }
    if (con.relation != Relation::kEqual) {
      tab.at(i, slack_col) = con.relation == Relation::kLessEqual ? 1.0 : -1.0;
      ++slack_col;
    }
    if (rhs < 0.0) {
      row_sign[i] = -1.0;
      rhs = -rhs;
      for (std::size_t k = 0; k < n_struct + n_slack; ++k) tab.at(i, k) = -tab.at(i, k);
    }
    const std::size_t art = n_struct + n_slack + i;
    tab.at(i, art) = 1.0;
    tab.basis_[i] = art;
    tab.basic_[art] = true;
    tab.beta_[i] = rhs;
  }
  for (std::size_t k = 0; k < n_struct; ++k) tab.upper_[k] = col_upper[k];

  Solution sol;
  const double rhs_scale =
      1.0 + (m == 0 ? 0.0 : *std::max_element(tab.beta_.begin(), tab.beta_.end()));

  // Phase 1: minimize the sum of artificials.
  std::vector<double> phase1(cols, 0.0);
  for (std::size_t i = 0; i < m; ++i) phase1[n_struct + n_slack + i] = 1.0;
  tab.price(phase1);
  iterate(tab, options, sol);
  double infeasibility = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis_[i] >= n_struct + n_slack) infeasibility += std::max(0.0, tab.beta_[i]);
  if (infeasibility > options.feasibility_tolerance * rhs_scale) {
    sol.status = Status::kInfeasible;
    return sol;
  }
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t art = n_struct + n_slack + i;
    tab.upper_[art] = 0.0;
    tab.at_upper_[art] = false;
  }
  for (std::size_t i = 0; i < m; ++i)
    if (tab.basis_[i] >= n_struct + n_slack) tab.beta_[i] = 0.0;

  // Phase 2.
  std::vector<double> phase2(cols, 0.0);
  std::copy(cost.begin(), cost.end(), phase2.begin());
  tab.price(phase2);
  if (iterate(tab, options, sol) == PhaseResult::kUnbounded) {
    sol.status = Status::kUnbounded;
    return sol;
  }

  std::vector<double> z(cols, 0.0);
  for (std::size_t j = 0; j < cols; ++j)
    if (!tab.basic_[j] && tab.at_upper_[j]) z[j] = tab.upper_[j];
  for (std::size_t i = 0; i < m; ++i) z[tab.basis_[i]] = tab.beta_[i];

  sol.x.assign(nv, 0.0);
  for (std::size_t k = 0; k < n_struct; ++k) {
    const ColumnOrigin& o = origin[k];
    switch (o.kind) {
      case ColumnOrigin::kShift: sol.x[o.var] = o.offset + z[k]; break;
      case ColumnOrigin::kMirror: sol.x[o.var] = o.offset - z[k]; break;
      case ColumnOrigin::kSplitPos: sol.x[o.var] += z[k]; break;
      case ColumnOrigin::kSplitNeg: sol.x[o.var] -= z[k]; break;
      default: break;
    }
  }
  sol.objective = 0.0;
  for (std::size_t j = 0; j < nv; ++j) sol.objective += program.objective[j] * sol.x[j];
  sol.duals.assign(m, 0.0);
  for (std::size_t i = 0; i < m; ++i) sol.duals[i] = -tab.d_[n_struct + n_slack + i] * row_sign[i];
  sol.status = Status::kOptimal;
  return sol;
}

}  // namespace submodstab::lp
