#pragma once

// Dense two-phase primal simplex with bounded variables and Bland's rule.
//
//   minimize    c^T x
//   subject to  a_i^T x (<=, =, >=) b_i
//               lower_j <= x_j <= upper_j   (either side may be infinite)

#include <limits>
#include <string>
#include <vector>

namespace submodstab::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Relation { kLessEqual, kEqual, kGreaterEqual };

struct Constraint {
  std::vector<double> coeffs;
  Relation relation = Relation::kLessEqual;
  double rhs = 0.0;
};

struct LinearProgram {
  std::vector<double> objective;
  std::vector<Constraint> constraints;
  /// Empty means 0 for every variable.
  std::vector<double> lower;
  /// Empty means +inf for every variable.
  std::vector<double> upper;

  std::size_t num_vars() const { return objective.size(); }
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

const char* status_name(Status status);

struct Solution {
  Status status = Status::kInfeasible;
  double objective = 0.0;
  std::vector<double> x;
  /// Shadow price of each constraint: d(optimum)/d(rhs_i).
  std::vector<double> duals;
  long pivots = 0;
  long bound_flips = 0;
};

struct SolverOptions {
  double pivot_tolerance = 1e-9;
  double cost_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  long max_iterations = 5'000'000;
};

/// Throws std::invalid_argument on malformed input (size mismatch, lower > upper,
/// NaN) and std::runtime_error if the iteration limit is hit.
Solution solve(const LinearProgram& program, const SolverOptions& options = {});

}  // namespace submodstab::lp
