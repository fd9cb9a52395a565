#pragma once

#include <Eigen/Dense>

namespace adha::lp {

enum class Status { kOptimal, kInfeasible, kUnbounded };

struct Result {
  Status status = Status::kInfeasible;
  Eigen::VectorXd x;
  double value = 0.0;
};

/// maximize c.x subject to a_le x <= b_le, a_eq x = b_eq, x free.
///
/// Dense two-phase primal simplex with Bland's rule. Meant for the small
/// systems that appear in polytope manipulation (a handful of variables,
/// tens of rows).
Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& a_le,
                const Eigen::VectorXd& b_le, const Eigen::MatrixXd& a_eq,
                const Eigen::VectorXd& b_eq);

/// Feasibility only (phase one).
bool feasible(const Eigen::MatrixXd& a_le, const Eigen::VectorXd& b_le,
              const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq);

}  // namespace adha::lp
