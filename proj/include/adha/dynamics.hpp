#pragma once

#include "adha/geometry.hpp"

namespace adha {

/// x' = A x.
struct LinearDynamics {
  Matrix matrix;

  int dimension() const { return static_cast<int>(matrix.rows()); }
};

/// x' = A x + b.
struct AffineDynamics {
  Matrix matrix;
  Vector offset;

  AffineDynamics() = default;
  AffineDynamics(Matrix a, Vector b);

  int dimension() const { return static_cast<int>(matrix.rows()); }
  /// Throws DimensionMismatch / NonFiniteInput.
  void validate() const;
  /// Entry-wise max distance of (A, b) to another system.
  double distance(const AffineDynamics& other) const;
};

/// e^{A t}.
Matrix exp_matrix(const Matrix& a, double t);

/// Affine flow map x(t) = phi x(0) + shift.
struct AffineMap {
  Matrix phi;
  Vector shift;

  Vector apply(const Vector& x) const { return phi * x + shift; }
};

AffineMap flow_map(const AffineDynamics& d, double t);

/// Solution of the affine system at time t from x0.
Vector flow(const AffineDynamics& d, const Vector& x0, double t);

/// Image of a bounded polytope under an affine map (vertices mapped, hull
/// taken).
Polytope map_polytope(const Polytope& p, const AffineMap& map);

/// {e^{At} x : x in P}.
Polytope reach(const Polytope& p, const Matrix& a, double t);
/// Affine variant {flow(d, x, t) : x in P}.
Polytope reach(const Polytope& p, const AffineDynamics& d, double t);

/// Linear system of dimension n+1 with block matrix [[A, b], [0, 0]] and
/// initial state (x0, 1).
std::pair<LinearDynamics, Vector> homogenize(const AffineDynamics& d, const Vector& x0);

/// C = [[A,0,0],[0,B,0],[A,-B,0]], z0 = (x0, y0, x0 - y0). The last block of
/// the solution is the difference of the two executions.
std::pair<Matrix, Vector> joint_difference_system(const Matrix& a, const Matrix& b,
                                                  const Vector& x0, const Vector& y0);

/// Time-reversed system (-A, -b).
AffineDynamics invert(const Matrix& a, const Vector& b);
inline AffineDynamics invert(const AffineDynamics& d) { return invert(d.matrix, d.offset); }

}  // namespace adha
