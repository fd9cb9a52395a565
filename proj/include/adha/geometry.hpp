#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "adha/errors.hpp"

namespace adha {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative feasibility tolerance: a constraint violated by at most
/// kFeasTol * max(1, |offset|) counts as satisfied.
inline constexpr double kFeasTol = 1e-9;

enum class Relation { kLe, kEq };

/// normal . x (<= | =) offset.
struct LinearConstraint {
  Vector normal;
  double offset = 0.0;
  Relation relation = Relation::kLe;

  LinearConstraint() = default;
  LinearConstraint(Vector n, double b, Relation rel = Relation::kLe);

  /// Signed violation of the constraint at x (<= 0 when satisfied; for
  /// equalities the absolute residual).
  double violation(const Vector& x) const;
  bool satisfied_by(const Vector& x, double tol = kFeasTol) const;
};

/// Infinity-norm ball {y : |center - y|_inf <= radius}.
struct Box {
  Vector center;
  double radius = 0.0;

  bool contains(const Vector& x, double tol = kFeasTol) const;
};

/// Convex polyhedral set in H-representation with a lazily computed vertex
/// list.
///
/// Constraints are canonical: every normal has unit Euclidean length, and
/// parallel inequalities with the same orientation are merged. Copies share
/// the vertex cache, which is filled at most once and is guarded by a mutex,
/// so const objects can be shared between threads.
class Polytope {
 public:
  /// The whole space R^dim (unbounded).
  explicit Polytope(int dim = 0);
  Polytope(int dim, std::vector<LinearConstraint> constraints);

  static Polytope from_box(const Box& box);
  static Polytope box(const Vector& lo, const Vector& hi);
  static Polytope point(const Vector& x);
  static Polytope empty(int dim);

  int dimension() const { return dim_; }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  bool contains(const Vector& x, double tol = kFeasTol) const;

  /// True when the vertex representation is already available.
  bool has_vertices() const;
  /// True when emptiness has been decided and the answer is "empty".
  bool known_empty() const;
  bool known_bounded() const { return known_bounded_; }

  // Internal constructors used by geometry routines that already know the
  // vertex set (convex hull, clipping).
  static Polytope with_vertices(int dim, std::vector<LinearConstraint> constraints,
                                std::vector<Vector> vertices);

 private:
  struct VertexCache {
    std::mutex mutex;
    bool ready = false;
    bool empty = false;
    std::vector<Vector> points;
  };

  friend const std::vector<Vector>& vertices(const Polytope& p);
  friend bool is_empty(const Polytope& p);
  friend Polytope intersect(const Polytope& p, const Polytope& q);
  friend Polytope contract(const Polytope& p, double delta);
  friend Polytope template_overapprox(const Polytope& p, std::span<const Vector> dirs);

  void set_cache(std::vector<Vector> points, bool empty) const;

  int dim_ = 0;
  std::vector<LinearConstraint> constraints_;
  bool known_bounded_ = false;
  std::shared_ptr<VertexCache> cache_;
};

/// Vertices of a bounded nonempty polytope in lexicographic order.
/// Throws EmptyPolytope or UnboundedPolytope.
const std::vector<Vector>& vertices(const Polytope& p);

/// Smallest polytope containing the points. Lower-dimensional point sets
/// produce equality constraints for the missing directions.
Polytope chull(std::span<const Vector> points);

/// Constraint union of two polytopes of equal dimension.
Polytope intersect(const Polytope& p, const Polytope& q);

/// Linear feasibility test with tolerance kFeasTol.
bool is_empty(const Polytope& p);

/// Shifts every inequality inward by delta / |normal|_2; equalities are kept.
Polytope contract(const Polytope& p, double delta);

/// max d . x over p. Throws UnboundedPolytope / EmptyPolytope.
double support_function(const Polytope& p, const Vector& direction);

/// Octagonal template: +-e_i and (+-e_i +- e_j) / sqrt(2) for i < j.
std::vector<Vector> octagonal_directions(int dim);

/// {x : d . x <= h_p(d) for all d in dirs}; contains p.
Polytope template_overapprox(const Polytope& p, std::span<const Vector> dirs);

/// Convex hull of all vertices of p attaining the support value in some
/// direction of dirs; contained in p.
Polytope template_underapprox(const Polytope& p, std::span<const Vector> dirs);

/// Same polytope re-expressed by its facets only (chull of its vertices).
Polytope minimized(const Polytope& p);

/// Axis-aligned bounds (lo, hi) of a bounded nonempty polytope.
std::pair<Vector, Vector> bounding_box(const Polytope& p);

/// p subset of q, decided on the vertices of p (tolerance relative as in
/// kFeasTol). An empty p is a subset of everything.
bool is_subset(const Polytope& p, const Polytope& q, double tol = kFeasTol);

/// Infinity-norm distance from x to the polytope (0 when inside).
double distance_inf(const Vector& x, const Polytope& p);

/// Infinity-norm Hausdorff distance between two bounded nonempty polytopes.
double hausdorff_distance(const Polytope& p, const Polytope& q);

/// Maximiser of the logarithmic barrier of the inequality constraints;
/// falls back to the vertex centroid for lower-dimensional polytopes.
Vector analytic_center(const Polytope& p);

/// Mean of the vertices.
Vector vertex_centroid(const Polytope& p);

}  // namespace adha
