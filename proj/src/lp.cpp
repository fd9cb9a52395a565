#include "adha/lp.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace adha::lp {
namespace {

constexpr double kPivotEps = 1e-11;

// Dense simplex tableau in the form
//   row 0       : reduced costs | -objective value
//   rows 1..m   : constraint rows | rhs
// maximising the objective encoded in row 0.
class Tableau {
 public:
  Tableau(int rows, int cols) : t_(Eigen::MatrixXd::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  double& at(int r, int c) { return t_(r, c); }
  double rhs(int r) const { return t_(r, t_.cols() - 1); }
  int rows() const { return static_cast<int>(t_.rows()) - 1; }
  int cols() const { return static_cast<int>(t_.cols()) - 1; }
  std::vector<int>& basis() { return basis_; }

  void pivot(int r, int c) {
    t_.row(r) /= t_(r, c);
    for (int i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[r - 1] = c;
  }

  // Sets the objective row to maximise sum_j cost[j] * var_j, expressed in
  // terms of the current basis.
  void set_objective(const Eigen::VectorXd& cost) {
    t_.row(0).setZero();
    for (int j = 0; j < cols(); ++j) t_(0, j) = -cost(j);
    for (int r = 1; r <= rows(); ++r) {
      const int b = basis_[r - 1];
      if (b >= 0 && t_(0, b) != 0.0) t_.row(0) -= t_(0, b) * t_.row(r);
    }
  }

  // Returns false when unbounded.
  bool optimise(const std::vector<bool>& allowed) {
    const int max_iter = 50 * (rows() + cols()) + 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
      int enter = -1;
      for (int j = 0; j < cols(); ++j) {
        if (allowed[j] && t_(0, j) < -1e-10) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 1; r <= rows(); ++r) {
        const double a = t_(r, enter);
        if (a > kPivotEps) {
          const double ratio = rhs(r) / a;
          if (leave < 0 || ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && basis_[r - 1] < basis_[leave - 1])) {
            best = ratio;
            leave = r;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }

  double objective_value() const { return t_(0, t_.cols() - 1); }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

struct Solved {
  bool feasible = false;
  bool unbounded = false;
  Eigen::VectorXd x;
  double value = 0.0;
};

Solved solve(const Eigen::VectorXd* c, const Eigen::MatrixXd& a_le, const Eigen::VectorXd& b_le,
             const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq) {
  const int n = static_cast<int>(std::max(a_le.cols(), a_eq.cols()));
  const int m_le = static_cast<int>(a_le.rows());
  const int m_eq = static_cast<int>(a_eq.rows());
  const int m = m_le + m_eq;
  // Columns: x+ (n), x- (n), slack (m_le), artificial (m).
  const int art0 = 2 * n + m_le;
  const int cols = art0 + m;
  Tableau tab(m, cols);

  double scale = 1.0;
  for (int i = 0; i < m; ++i) {
    const bool le = i < m_le;
    const auto row = le ? a_le.row(i) : a_eq.row(i - m_le);
    double b = le ? b_le(i) : b_eq(i - m_le);
    scale = std::max(scale, std::abs(b));
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) {
      tab.at(i + 1, j) = sign * row(j);
      tab.at(i + 1, n + j) = -sign * row(j);
    }
    if (le) tab.at(i + 1, 2 * n + i) = sign;
    tab.at(i + 1, art0 + i) = 1.0;
    tab.at(i + 1, cols) = sign * b;
    tab.basis()[i] = art0 + i;
  }

  std::vector<bool> allowed(cols, true);
  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
  phase1.tail(m).setConstant(-1.0);
  tab.set_objective(phase1);
  tab.optimise(allowed);
  // objective row holds -value; value = -sum(artificials)
  const double infeasibility = tab.objective_value();
  Solved out;
  if (std::abs(infeasibility) > 1e-10 * scale) return out;
  out.feasible = true;

  // Drive remaining artificials out of the basis.
  for (int r = 1; r <= m; ++r) {
    if (tab.basis()[r - 1] < art0) continue;
    for (int j = 0; j < art0; ++j) {
      if (std::abs(tab.at(r, j)) > 1e-9) {
        tab.pivot(r, j);
        break;
      }
    }
  }
  for (int j = art0; j < cols; ++j) allowed[j] = false;

  auto extract = [&]() {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int r = 1; r <= m; ++r) {
      const int b = tab.basis()[r - 1];
      if (b < n) x(b) += tab.rhs(r);
      else if (b < 2 * n) x(b - n) -= tab.rhs(r);
    }
    return x;
  };

  if (c == nullptr) {
    out.x = extract();
    return out;
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost.head(n) = *c;
  cost.segment(n, n) = -*c;
  tab.set_objective(cost);
  if (!tab.optimise(allowed)) {
    out.unbounded = true;
    return out;
  }
  out.x = extract();
  out.value = c->dot(out.x);
  return out;
}

}  // namespace

Result maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& a_le, const Eigen::VectorXd& b_le,
                const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq) {
  const Solved s = solve(&c, a_le, b_le, a_eq, b_eq);
  Result r;
  if (!s.feasible) {
    r.status = Status::kInfeasible;
  } else if (s.unbounded) {
    r.status = Status::kUnbounded;
  } else {
    r.status = Status::kOptimal;
    r.x = s.x;
    r.value = s.value;
  }
  return r;
}

bool feasible(const Eigen::MatrixXd& a_le, const Eigen::VectorXd& b_le,
              const Eigen::MatrixXd& a_eq, const Eigen::VectorXd& b_eq) {
  return solve(nullptr, a_le, b_le, a_eq, b_eq).feasible;
}

}  // namespace adha::lp
