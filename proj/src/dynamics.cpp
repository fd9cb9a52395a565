#include "adha/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

namespace adha {

AffineDynamics::AffineDynamics(Matrix a, Vector b) : matrix(std::move(a)), offset(std::move(b)) {}

void AffineDynamics::validate() const {
  if (matrix.rows() != matrix.cols() || matrix.rows() != offset.size()) {
    throw DimensionMismatch("affine dynamics: matrix must be square and match the offset");
  }
  if (!matrix.allFinite() || !offset.allFinite()) {
    throw NonFiniteInput("affine dynamics: non-finite coefficients");
  }
}

double AffineDynamics::distance(const AffineDynamics& other) const {
  if (dimension() != other.dimension()) return std::numeric_limits<double>::infinity();
  return std::max((matrix - other.matrix).cwiseAbs().maxCoeff(),
                  (offset - other.offset).cwiseAbs().maxCoeff());
}

Matrix exp_matrix(const Matrix& a, double t) {
  if (a.rows() != a.cols()) throw DimensionMismatch("exp_matrix: matrix is not square");
  if (!std::isfinite(t) || !a.allFinite()) throw NonFiniteInput("exp_matrix: non-finite input");
  const Matrix at = a * t;
  return at.exp();
}

AffineMap flow_map(const AffineDynamics& d, double t) {
  const int n = d.dimension();
  Matrix h = Matrix::Zero(n + 1, n + 1);
  h.topLeftCorner(n, n) = d.matrix;
  h.topRightCorner(n, 1) = d.offset;
  const Matrix e = exp_matrix(h, t);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, 1)};
}

Vector flow(const AffineDynamics& d, const Vector& x0, double t) {
  if (x0.size() != d.dimension()) throw DimensionMismatch("flow: state dimension");
  return flow_map(d, t).apply(x0);
}

Polytope map_polytope(const Polytope& p, const AffineMap& map) {
  const auto& vs = vertices(p);
  std::vector<Vector> img;
  img.reserve(vs.size());
  for (const auto& v : vs) img.push_back(map.apply(v));
  return chull(img);
}

Polytope reach(const Polytope& p, const Matrix& a, double t) {
  return map_polytope(p, {exp_matrix(a, t), Vector::Zero(a.rows())});
}

Polytope reach(const Polytope& p, const AffineDynamics& d, double t) {
  return map_polytope(p, flow_map(d, t));
}

std::pair<LinearDynamics, Vector> homogenize(const AffineDynamics& d, const Vector& x0) {
  const int n = d.dimension();
  if (x0.size() != n) throw DimensionMismatch("homogenize: state dimension");
  LinearDynamics lin{Matrix::Zero(n + 1, n + 1)};
  lin.matrix.topLeftCorner(n, n) = d.matrix;
  lin.matrix.topRightCorner(n, 1) = d.offset;
  Vector z(n + 1);
  z << x0, 1.0;
  return {lin, z};
}

std::pair<Matrix, Vector> joint_difference_system(const Matrix& a, const Matrix& b,
                                                  const Vector& x0, const Vector& y0) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || b.rows() != n || b.cols() != n || x0.size() != n || y0.size() != n) {
    throw DimensionMismatch("joint_difference_system: incompatible dimensions");
  }
  Matrix c = Matrix::Zero(3 * n, 3 * n);
  c.block(0, 0, n, n) = a;
  c.block(n, n, n, n) = b;
  c.block(2 * n, 0, n, n) = a;
  c.block(2 * n, n, n, n) = -b;
  Vector z(3 * n);
  z << x0, y0, x0 - y0;
  return {c, z};
}

AffineDynamics invert(const Matrix& a, const Vector& b) { return {-a, -b}; }

}  // namespace adha
