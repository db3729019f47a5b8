#pragma once

#include <vector>

namespace trajhedge::lp {

enum class Status { Optimal, Infeasible, Unbounded };

/// maximize c.x subject to A x = b, x >= 0.
struct StandardForm {
  std::vector<std::vector<double>> a;  ///< rows
  std::vector<double> b;
  std::vector<double> c;
};

struct Solution {
  Status status = Status::Infeasible;
  double objective = 0.0;
  std::vector<double> x;
  std::vector<double> duals;  ///< y with y^T A >= c and y^T b = objective
};

/// Dense two-phase simplex. Dantzig pricing, switching to Bland's rule
/// after a run of degenerate pivots.
[[nodiscard]] Solution solve(const StandardForm& problem, double tol = 1e-10);

}  // namespace trajhedge::lp
