#include "adha/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "adha/lp.hpp"

namespace adha {
namespace {

double scale_of(const Vector& x) { return std::max(1.0, x.cwiseAbs().maxCoeff()); }

double offset_tol(double b) { return kFeasTol * std::max(1.0, std::abs(b)); }

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) < b(i)) return true;
    if (a(i) > b(i)) return false;
  }
  return false;
}

bool near(const Vector& a, const Vector& b) {
  return (a - b).cwiseAbs().maxCoeff() <= 1e-9 * std::max(scale_of(a), scale_of(b));
}

std::vector<Vector> dedupe_sorted(std::vector<Vector> pts) {
  std::vector<Vector> out;
  out.reserve(pts.size());
  for (auto& p : pts) {
    bool dup = false;
    for (const auto& q : out) {
      if (near(p, q)) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  std::sort(out.begin(), out.end(), lex_less);
  return out;
}

void check_dim(int a, int b, const char* what) {
  if (a != b) {
    throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) + " vs " +
                            std::to_string(b));
  }
}

// Stacks constraints into LP matrices.
struct Rows {
  Matrix a_le, a_eq;
  Vector b_le, b_eq;
};

Rows to_rows(const Polytope& p, double relax) {
  const int n = p.dimension();
  int n_le = 0, n_eq = 0;
  for (const auto& c : p.constraints()) (c.relation == Relation::kLe ? n_le : n_eq)++;
  // Equalities are relaxed to two-sided inequalities when relax > 0.
  const bool split_eq = relax > 0.0;
  Rows r;
  r.a_le.resize(n_le + (split_eq ? 2 * n_eq : 0), n);
  r.b_le.resize(r.a_le.rows());
  r.a_eq.resize(split_eq ? 0 : n_eq, n);
  r.b_eq.resize(r.a_eq.rows());
  int i = 0, j = 0;
  for (const auto& c : p.constraints()) {
    const double slack = relax * std::max(1.0, std::abs(c.offset));
    if (c.relation == Relation::kLe) {
      r.a_le.row(i) = c.normal.transpose();
      r.b_le(i++) = c.offset + slack;
    } else if (split_eq) {
      r.a_le.row(i) = c.normal.transpose();
      r.b_le(i++) = c.offset + slack;
      r.a_le.row(i) = -c.normal.transpose();
      r.b_le(i++) = -c.offset + slack;
    } else {
      r.a_eq.row(j) = c.normal.transpose();
      r.b_eq(j++) = c.offset;
    }
  }
  return r;
}

// Interval [lo, hi] described by 1-D constraints; nullopt when empty.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
};

std::optional<Interval> interval_of(const std::vector<LinearConstraint>& cs) {
  Interval iv;
  for (const auto& c : cs) {
    const double a = c.normal(0);
    const double v = c.offset / a;
    if (c.relation == Relation::kEq) {
      iv.lo = std::max(iv.lo, v);
      iv.hi = std::min(iv.hi, v);
    } else if (a > 0) {
      iv.hi = std::min(iv.hi, v);
    } else {
      iv.lo = std::max(iv.lo, v);
    }
  }
  if (iv.lo > iv.hi) {
    const double tol = kFeasTol * std::max(1.0, std::max(std::abs(iv.lo), std::abs(iv.hi)));
    if (iv.lo - iv.hi > tol) return std::nullopt;
    const double mid = 0.5 * (iv.lo + iv.hi);
    iv.lo = iv.hi = mid;
  }
  return iv;
}

double cross2(const Vector& o, const Vector& a, const Vector& b) {
  return (a(0) - o(0)) * (b(1) - o(1)) - (a(1) - o(1)) * (b(0) - o(0));
}

bool left_turn(const Vector& o, const Vector& a, const Vector& b) {
  const double c = cross2(o, a, b);
  return c > 1e-10 * (a - o).norm() * (b - o).norm();
}

// Indices of the counter-clockwise convex hull of 2-D points (no collinear
// points kept).
std::vector<int> hull2d(const std::vector<Vector>& pts) {
  std::vector<int> idx(pts.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return lex_less(pts[a], pts[b]); });
  if (idx.size() < 3) return idx;
  std::vector<int> h(2 * idx.size());
  int k = 0;
  for (int i : idx) {
    while (k >= 2 && !left_turn(pts[h[k - 2]], pts[h[k - 1]], pts[i])) --k;
    h[k++] = i;
  }
  for (int t = static_cast<int>(idx.size()) - 2, lower = k + 1; t >= 0; --t) {
    const int i = idx[t];
    while (k >= lower && !left_turn(pts[h[k - 2]], pts[h[k - 1]], pts[i])) --k;
    h[k++] = i;
  }
  h.resize(k - 1);
  return h;
}

// Full-dimensional hull in r >= 3 dimensions by facet enumeration.
void hull_nd(const std::vector<Vector>& y, std::vector<std::pair<Vector, double>>& facets,
             std::vector<int>& extreme) {
  const int r = static_cast<int>(y[0].size());
  const int p = static_cast<int>(y.size());
  double scale = 1.0;
  for (const auto& v : y) scale = std::max(scale, scale_of(v));
  std::vector<int> comb(r);
  std::iota(comb.begin(), comb.end(), 0);
  auto next = [&]() {
    int i = r - 1;
    while (i >= 0 && comb[i] == p - r + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < r; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  if (p < r + 1) return;
  do {
    Matrix d(r - 1, r);
    for (int i = 1; i < r; ++i) d.row(i - 1) = (y[comb[i]] - y[comb[0]]).transpose();
    Eigen::FullPivLU<Matrix> lu(d);
    lu.setThreshold(1e-10);
    if (lu.rank() != r - 1) continue;
    Vector g = lu.kernel().col(0);
    g.normalize();
    double h = g.dot(y[comb[0]]);
    int pos = 0, neg = 0;
    const double tol = 1e-9 * scale;
    for (const auto& v : y) {
      const double s = g.dot(v) - h;
      if (s > tol) ++pos;
      if (s < -tol) ++neg;
    }
    if (pos > 0 && neg > 0) continue;
    if (pos > 0) {
      g = -g;
      h = -h;
    }
    bool dup = false;
    for (const auto& [gg, hh] : facets) {
      if ((gg - g).norm() < 1e-9 && std::abs(hh - h) < 1e-9 * scale) dup = true;
    }
    if (!dup) facets.emplace_back(g, h);
  } while (next());
  for (int i = 0; i < p; ++i) {
    std::vector<Vector> tight;
    for (const auto& [g, h] : facets) {
      if (std::abs(g.dot(y[i]) - h) <= 1e-9 * scale) tight.push_back(g);
    }
    if (static_cast<int>(tight.size()) < r) continue;
    Matrix m(tight.size(), r);
    for (size_t k = 0; k < tight.size(); ++k) m.row(k) = tight[k].transpose();
    Eigen::FullPivLU<Matrix> lu(m);
    lu.setThreshold(1e-10);
    if (lu.rank() == r) extreme.push_back(i);
  }
}

std::vector<Vector> enumerate_vertices(int n, const std::vector<LinearConstraint>& cs) {
  std::vector<Vector> found;
  const int m = static_cast<int>(cs.size());
  if (m < n) return found;
  std::vector<int> comb(n);
  std::iota(comb.begin(), comb.end(), 0);
  Matrix a(n, n);
  Vector b(n);
  while (true) {
    for (int i = 0; i < n; ++i) {
      a.row(i) = cs[comb[i]].normal.transpose();
      b(i) = cs[comb[i]].offset;
    }
    Eigen::FullPivLU<Matrix> lu(a);
    lu.setThreshold(1e-12);
    if (lu.rank() == n) {
      Vector x = lu.solve(b);
      bool ok = x.allFinite();
      for (int k = 0; ok && k < m; ++k) ok = cs[k].satisfied_by(x);
      if (ok) found.push_back(std::move(x));
    }
    int i = n - 1;
    while (i >= 0 && comb[i] == m - n + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
  }
  return dedupe_sorted(std::move(found));
}

bool recession_cone_trivial(const Polytope& p) {
  const int n = p.dimension();
  const Rows rows = to_rows(p, 0.0);
  Matrix a_le(rows.a_le.rows() + 2 * n, n);
  Vector b_le = Vector::Zero(a_le.rows());
  a_le.topRows(rows.a_le.rows()) = rows.a_le;
  a_le.block(rows.a_le.rows(), 0, n, n) = Matrix::Identity(n, n);
  a_le.block(rows.a_le.rows() + n, 0, n, n) = -Matrix::Identity(n, n);
  b_le.tail(2 * n).setOnes();
  const Vector b_eq = Vector::Zero(rows.a_eq.rows());
  for (int i = 0; i < n; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector c = Vector::Zero(n);
      c(i) = s;
      const auto res = lp::maximize(c, a_le, b_le, rows.a_eq, b_eq);
      if (res.status == lp::Status::kOptimal && res.value > 1e-9) return false;
    }
  }
  return true;
}

// 2-D polygon in counter-clockwise order.
std::vector<Vector> ccw_order(std::vector<Vector> pts) {
  if (pts.size() < 3) return pts;
  Vector c = Vector::Zero(2);
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  std::sort(pts.begin(), pts.end(), [&](const Vector& a, const Vector& b) {
    return std::atan2(a(1) - c(1), a(0) - c(0)) < std::atan2(b(1) - c(1), b(0) - c(0));
  });
  return pts;
}

std::vector<Vector> clip_halfplane(const std::vector<Vector>& poly, const Vector& a, double b) {
  std::vector<Vector> out;
  const size_t k = poly.size();
  if (k == 0) return out;
  const double tol = offset_tol(b);
  if (k == 1) {
    if (a.dot(poly[0]) - b <= tol) out.push_back(poly[0]);
    return out;
  }
  for (size_t i = 0; i < k; ++i) {
    const Vector& cur = poly[i];
    const Vector& nxt = poly[(i + 1) % k];
    const double sc = a.dot(cur) - b;
    const double sn = a.dot(nxt) - b;
    const bool in_c = sc <= tol;
    const bool in_n = sn <= tol;
    if (in_c) out.push_back(cur);
    if (in_c != in_n && std::abs(sc - sn) > 0.0) {
      const double lambda = sc / (sc - sn);
      if (lambda > 0.0 && lambda < 1.0) out.push_back(cur + lambda * (nxt - cur));
    }
  }
  return out;
}

std::optional<std::vector<Vector>> clip_vertices(int dim, const std::vector<Vector>& verts,
                                                 const std::vector<LinearConstraint>& cs) {
  if (dim == 1) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : verts) {
      lo = std::min(lo, v(0));
      hi = std::max(hi, v(0));
    }
    std::vector<LinearConstraint> all = cs;
    all.emplace_back(Vector::Constant(1, 1.0), hi);
    all.emplace_back(Vector::Constant(1, -1.0), -lo);
    const auto iv = interval_of(all);
    if (!iv) return std::nullopt;
    std::vector<Vector> out{Vector::Constant(1, iv->lo)};
    if (iv->hi > iv->lo) out.push_back(Vector::Constant(1, iv->hi));
    return out;
  }
  std::vector<Vector> poly = ccw_order(verts);
  for (const auto& c : cs) {
    poly = clip_halfplane(poly, c.normal, c.offset);
    if (c.relation == Relation::kEq) {
      poly = clip_halfplane(poly, -c.normal, -c.offset);
      for (auto& v : poly) v -= (c.normal.dot(v) - c.offset) * c.normal;
    }
    if (poly.empty()) return std::nullopt;
    poly = ccw_order(dedupe_sorted(std::move(poly)));
  }
  if (poly.size() >= 3) {
    std::vector<Vector> extreme;
    for (int i : hull2d(poly)) extreme.push_back(poly[i]);
    if (extreme.size() >= 2) poly = std::move(extreme);
  }
  return dedupe_sorted(std::move(poly));
}

bool has_axis_pairs(int n, std::span<const Vector> dirs) {
  for (int i = 0; i < n; ++i) {
    bool plus = false, minus = false;
    for (const auto& d : dirs) {
      Vector e = Vector::Zero(n);
      e(i) = 1.0;
      const Vector u = d.normalized();
      if ((u - e).norm() < 1e-12) plus = true;
      if ((u + e).norm() < 1e-12) minus = true;
    }
    if (!plus || !minus) return false;
  }
  return true;
}

}  // namespace

LinearConstraint::LinearConstraint(Vector n, double b, Relation rel)
    : normal(std::move(n)), offset(b), relation(rel) {}

double LinearConstraint::violation(const Vector& x) const {
  const double r = normal.dot(x) - offset;
  return relation == Relation::kLe ? r : std::abs(r);
}

bool LinearConstraint::satisfied_by(const Vector& x, double tol) const {
  return violation(x) <= tol * std::max(1.0, std::abs(offset));
}

bool Box::contains(const Vector& x, double tol) const {
  return (x - center).cwiseAbs().maxCoeff() <= radius + tol * std::max(1.0, scale_of(center));
}

Polytope::Polytope(int dim) : dim_(dim), cache_(std::make_shared<VertexCache>()) {}

Polytope::Polytope(int dim, std::vector<LinearConstraint> constraints)
    : dim_(dim), cache_(std::make_shared<VertexCache>()) {
  constraints_.reserve(constraints.size());
  for (auto& c : constraints) {
    check_dim(static_cast<int>(c.normal.size()), dim, "constraint");
    if (!c.normal.allFinite() || !std::isfinite(c.offset)) {
      throw NonFiniteInput("constraint with non-finite coefficients");
    }
    const double len = c.normal.norm();
    if (len == 0.0) throw DataError("constraint with zero normal");
    c.normal /= len;
    c.offset /= len;
    bool merged = false;
    for (auto& e : constraints_) {
      if (e.relation != c.relation) continue;
      if ((e.normal - c.normal).cwiseAbs().maxCoeff() <= 1e-14) {
        if (c.relation == Relation::kLe) {
          e.offset = std::min(e.offset, c.offset);
          merged = true;
        } else if (std::abs(e.offset - c.offset) <= 1e-15 * std::max(1.0, std::abs(c.offset))) {
          merged = true;
        }
        if (merged) break;
      }
    }
    if (!merged) constraints_.push_back(std::move(c));
  }
}

Polytope Polytope::with_vertices(int dim, std::vector<LinearConstraint> constraints,
                                 std::vector<Vector> verts) {
  Polytope p(dim, std::move(constraints));
  const bool empty = verts.empty();
  p.known_bounded_ = true;
  p.set_cache(std::move(verts), empty);
  return p;
}

void Polytope::set_cache(std::vector<Vector> points, bool empty) const {
  std::lock_guard lock(cache_->mutex);
  cache_->points = std::move(points);
  cache_->empty = empty;
  cache_->ready = true;
}

bool Polytope::has_vertices() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->ready;
}

bool Polytope::known_empty() const {
  std::lock_guard lock(cache_->mutex);
  return cache_->ready && cache_->empty;
}

Polytope Polytope::from_box(const Box& box) {
  return Polytope::box(box.center.array() - box.radius, box.center.array() + box.radius);
}

Polytope Polytope::box(const Vector& lo, const Vector& hi) {
  const int n = static_cast<int>(lo.size());
  check_dim(static_cast<int>(hi.size()), n, "box");
  std::vector<LinearConstraint> cs;
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    cs.emplace_back(e, hi(i));
    cs.emplace_back(-e, -lo(i));
  }
  if ((lo.array() > hi.array()).any()) {
    Polytope p(n, std::move(cs));
    p.known_bounded_ = true;
    p.set_cache({}, true);
    return p;
  }
  std::vector<Vector> corners;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = (mask >> i) & 1 ? hi(i) : lo(i);
    corners.push_back(v);
  }
  return with_vertices(n, std::move(cs), dedupe_sorted(std::move(corners)));
}

Polytope Polytope::point(const Vector& x) {
  const int n = static_cast<int>(x.size());
  std::vector<LinearConstraint> cs;
  for (int i = 0; i < n; ++i) {
    Vector e = Vector::Zero(n);
    e(i) = 1.0;
    cs.emplace_back(e, x(i), Relation::kEq);
  }
  return with_vertices(n, std::move(cs), {x});
}

Polytope Polytope::empty(int dim) {
  Vector e = Vector::Zero(dim);
  e(0) = 1.0;
  Polytope p(dim, {LinearConstraint(e, -1.0), LinearConstraint(-e, -1.0)});
  p.known_bounded_ = true;
  p.set_cache({}, true);
  return p;
}

bool Polytope::contains(const Vector& x, double tol) const {
  check_dim(static_cast<int>(x.size()), dim_, "contains");
  if (known_empty()) return false;
  for (const auto& c : constraints_) {
    if (!c.satisfied_by(x, tol)) return false;
  }
  return true;
}

const std::vector<Vector>& vertices(const Polytope& p) {
  auto& cache = *p.cache_;
  std::lock_guard lock(cache.mutex);
  if (!cache.ready) {
    const int n = p.dim_;
    if (n == 1) {
      const auto iv = interval_of(p.constraints_);
      if (!iv) {
        cache.empty = true;
      } else {
        if (!std::isfinite(iv->lo) || !std::isfinite(iv->hi)) {
          throw UnboundedPolytope("vertices: polytope is unbounded");
        }
        cache.points = {Vector::Constant(1, iv->lo)};
        if (iv->hi > iv->lo) cache.points.push_back(Vector::Constant(1, iv->hi));
      }
    } else {
      auto pts = enumerate_vertices(n, p.constraints_);
      if (pts.empty()) {
        const Rows rows = to_rows(p, kFeasTol);
        if (lp::feasible(rows.a_le, rows.b_le, rows.a_eq, rows.b_eq)) {
          throw UnboundedPolytope("vertices: polytope is unbounded");
        }
        cache.empty = true;
      } else {
        if (!p.known_bounded_ && !recession_cone_trivial(p)) {
          throw UnboundedPolytope("vertices: polytope is unbounded");
        }
        cache.points = std::move(pts);
      }
    }
    cache.ready = true;
  }
  if (cache.empty) throw EmptyPolytope("vertices: polytope is empty");
  return cache.points;
}

Polytope chull(std::span<const Vector> points) {
  if (points.empty()) throw EmptyInput("chull: no points");
  const int n = static_cast<int>(points[0].size());
  for (const auto& p : points) {
    check_dim(static_cast<int>(p.size()), n, "chull");
    if (!p.allFinite()) throw NonFiniteInput("chull: non-finite point");
  }
  std::vector<Vector> pts = dedupe_sorted(std::vector<Vector>(points.begin(), points.end()));
  double scale = 1.0;
  for (const auto& p : pts) scale = std::max(scale, scale_of(p));

  Vector c = Vector::Zero(n);
  for (const auto& p : pts) c += p;
  c /= static_cast<double>(pts.size());
  Matrix x(n, pts.size());
  for (size_t j = 0; j < pts.size(); ++j) x.col(j) = pts[j] - c;

  int r = 0;
  Matrix u = Matrix::Identity(n, n);
  if (pts.size() > 1) {
    Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeFullU);
    u = svd.matrixU();
    const auto& s = svd.singularValues();
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      if (s(i) > 1e-9 * scale) ++r;
    }
  }

  std::vector<LinearConstraint> cs;
  if (r == 0) {
    return Polytope::point(c);
  }
  for (int k = r; k < n; ++k) {
    const Vector uk = u.col(k);
    cs.emplace_back(uk, uk.dot(c), Relation::kEq);
  }
  const Matrix ur = u.leftCols(r);
  std::vector<Vector> y;
  y.reserve(pts.size());
  for (const auto& p : pts) y.push_back(ur.transpose() * (p - c));

  std::vector<int> extreme;
  auto add_facet = [&](const Vector& g, double h) {
    const Vector normal = ur * g;
    cs.emplace_back(normal, h + normal.dot(c));
  };
  if (r == 2) {
    const auto h = hull2d(y);
    if (h.size() >= 3) {
      for (size_t i = 0; i < h.size(); ++i) {
        const Vector& a = y[h[i]];
        const Vector& b = y[h[(i + 1) % h.size()]];
        Vector g(2);
        g << b(1) - a(1), -(b(0) - a(0));
        g.normalize();
        add_facet(g, g.dot(a));
      }
      extreme = h;
    } else {
      r = 1;  // numerically collinear
    }
  }
  if (r == 1) {
    // drop the second direction as an additional equality when needed
    if (u.cols() > 1 && cs.size() < static_cast<size_t>(n - 1)) {
      const Vector u1 = u.col(1);
      cs.emplace_back(u1, u1.dot(c), Relation::kEq);
    }
    int lo = 0, hi = 0;
    for (size_t j = 0; j < pts.size(); ++j) {
      const double v = u.col(0).dot(pts[j] - c);
      if (v < u.col(0).dot(pts[lo] - c)) lo = static_cast<int>(j);
      if (v > u.col(0).dot(pts[hi] - c)) hi = static_cast<int>(j);
    }
    const Vector u0 = u.col(0);
    cs.emplace_back(u0, u0.dot(pts[hi]));
    cs.emplace_back(-u0, -u0.dot(pts[lo]));
    extreme = {lo, hi};
  } else if (r >= 3) {
    std::vector<std::pair<Vector, double>> facets;
    hull_nd(y, facets, extreme);
    for (const auto& [g, h] : facets) add_facet(g, h);
  }
  std::vector<Vector> verts;
  for (int i : extreme) verts.push_back(pts[i]);
  return Polytope::with_vertices(n, std::move(cs), dedupe_sorted(std::move(verts)));
}

Polytope intersect(const Polytope& p, const Polytope& q) {
  check_dim(p.dimension(), q.dimension(), "intersect");
  std::vector<LinearConstraint> cs = p.constraints();
  cs.insert(cs.end(), q.constraints().begin(), q.constraints().end());
  const int n = p.dimension();
  if (p.known_empty() || q.known_empty()) {
    Polytope r(n, std::move(cs));
    r.known_bounded_ = true;
    r.set_cache({}, true);
    return r;
  }
  if (n <= 2) {
    const Polytope* with = p.has_vertices() ? &p : (q.has_vertices() ? &q : nullptr);
    if (with != nullptr) {
      const Polytope& other = with == &p ? q : p;
      const auto clipped = clip_vertices(n, vertices(*with), other.constraints());
      if (!clipped) {
        Polytope r(n, std::move(cs));
        r.known_bounded_ = true;
        r.set_cache({}, true);
        return r;
      }
      return Polytope::with_vertices(n, std::move(cs), *clipped);
    }
  }
  Polytope r(n, std::move(cs));
  r.known_bounded_ = p.known_bounded_ || q.known_bounded_;
  return r;
}

bool is_empty(const Polytope& p) {
  {
    std::lock_guard lock(p.cache_->mutex);
    if (p.cache_->ready) return p.cache_->empty;
  }
  if (p.dimension() == 1) return !interval_of(p.constraints()).has_value();
  if (p.known_bounded_ && p.dimension() <= 2) {
    try {
      vertices(p);
      return false;
    } catch (const EmptyPolytope&) {
      return true;
    }
  }
  const Rows rows = to_rows(p, kFeasTol);
  const bool empty = !lp::feasible(rows.a_le, rows.b_le, rows.a_eq, rows.b_eq);
  if (empty) p.set_cache({}, true);
  return empty;
}

Polytope contract(const Polytope& p, double delta) {
  if (!(delta >= 0.0)) throw DataError("contract: delta must be non-negative");
  if (delta == 0.0) return p;
  std::vector<LinearConstraint> cs = p.constraints();
  for (auto& c : cs) {
    if (c.relation == Relation::kLe) c.offset -= delta;  // normals have unit length
  }
  Polytope r(p.dimension(), std::move(cs));
  r.known_bounded_ = p.known_bounded_;
  if (p.known_empty()) r.set_cache({}, true);
  return r;
}

double support_function(const Polytope& p, const Vector& direction) {
  check_dim(static_cast<int>(direction.size()), p.dimension(), "support_function");
  if (p.known_bounded() || p.has_vertices()) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vertices(p)) best = std::max(best, direction.dot(v));
    return best;
  }
  const Rows rows = to_rows(p, 0.0);
  const auto res = lp::maximize(direction, rows.a_le, rows.b_le, rows.a_eq, rows.b_eq);
  if (res.status == lp::Status::kInfeasible) {
    // retry with tolerance before declaring emptiness
    if (is_empty(p)) throw EmptyPolytope("support_function: polytope is empty");
    const Rows relaxed = to_rows(p, kFeasTol);
    const auto r2 = lp::maximize(direction, relaxed.a_le, relaxed.b_le, relaxed.a_eq, relaxed.b_eq);
    if (r2.status == lp::Status::kUnbounded) throw UnboundedPolytope("support_function: unbounded");
    return r2.value;
  }
  if (res.status == lp::Status::kUnbounded) throw UnboundedPolytope("support_function: unbounded");
  return res.value;
}

std::vector<Vector> octagonal_directions(int dim) {
  std::vector<Vector> dirs;
  for (int i = 0; i < dim; ++i) {
    for (double s : {1.0, -1.0}) {
      Vector e = Vector::Zero(dim);
      e(i) = s;
      dirs.push_back(e);
    }
  }
  const double h = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < dim; ++i) {
    for (int j = i + 1; j < dim; ++j) {
      for (double si : {1.0, -1.0}) {
        for (double sj : {1.0, -1.0}) {
          Vector d = Vector::Zero(dim);
          d(i) = si * h;
          d(j) = sj * h;
          dirs.push_back(d);
        }
      }
    }
  }
  return dirs;
}

Polytope template_overapprox(const Polytope& p, std::span<const Vector> dirs) {
  if (is_empty(p)) return Polytope::empty(p.dimension());
  std::vector<LinearConstraint> cs;
  cs.reserve(dirs.size());
  for (const auto& d : dirs) cs.emplace_back(d, support_function(p, d));
  Polytope r(p.dimension(), std::move(cs));
  r.known_bounded_ = has_axis_pairs(p.dimension(), dirs);
  return r;
}

Polytope template_underapprox(const Polytope& p, std::span<const Vector> dirs) {
  const auto& vs = vertices(p);
  double scale = 1.0;
  for (const auto& v : vs) scale = std::max(scale, scale_of(v));
  std::vector<Vector> chosen;
  for (const auto& d : dirs) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& v : vs) best = std::max(best, d.dot(v));
    for (const auto& v : vs) {
      if (d.dot(v) >= best - 1e-9 * scale) chosen.push_back(v);
    }
  }
  return chull(chosen);
}

Polytope minimized(const Polytope& p) {
  if (is_empty(p)) return Polytope::empty(p.dimension());
  return chull(vertices(p));
}

std::pair<Vector, Vector> bounding_box(const Polytope& p) {
  const auto& vs = vertices(p);
  Vector lo = vs[0], hi = vs[0];
  for (const auto& v : vs) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  return {lo, hi};
}

bool is_subset(const Polytope& p, const Polytope& q, double tol) {
  check_dim(p.dimension(), q.dimension(), "is_subset");
  if (is_empty(p)) return true;
  for (const auto& v : vertices(p)) {
    if (!q.contains(v, tol)) return false;
  }
  return true;
}

double distance_inf(const Vector& x, const Polytope& p) {
  const int n = p.dimension();
  check_dim(static_cast<int>(x.size()), n, "distance_inf");
  if (p.contains(x)) return 0.0;
  // variables (y, t): maximise -t s.t. y in p, |x - y|_i <= t
  const Rows rows = to_rows(p, 0.0);
  Matrix a_le(rows.a_le.rows() + 2 * n, n + 1);
  a_le.setZero();
  Vector b_le(a_le.rows());
  a_le.topLeftCorner(rows.a_le.rows(), n) = rows.a_le;
  b_le.head(rows.a_le.rows()) = rows.b_le;
  for (int i = 0; i < n; ++i) {
    const Eigen::Index r1 = rows.a_le.rows() + 2 * i;
    // x_i - y_i <= t  ->  -y_i - t <= -x_i
    a_le(r1, i) = -1.0;
    a_le(r1, n) = -1.0;
    b_le(r1) = -x(i);
    // y_i - x_i <= t
    a_le(r1 + 1, i) = 1.0;
    a_le(r1 + 1, n) = -1.0;
    b_le(r1 + 1) = x(i);
  }
  Matrix a_eq = Matrix::Zero(rows.a_eq.rows(), n + 1);
  a_eq.leftCols(n) = rows.a_eq;
  Vector c = Vector::Zero(n + 1);
  c(n) = -1.0;
  const auto res = lp::maximize(c, a_le, b_le, a_eq, rows.b_eq);
  if (res.status != lp::Status::kOptimal) throw EmptyPolytope("distance_inf: polytope is empty");
  return std::max(0.0, -res.value);
}

double hausdorff_distance(const Polytope& p, const Polytope& q) {
  check_dim(p.dimension(), q.dimension(), "hausdorff_distance");
  double d = 0.0;
  for (const auto& v : vertices(p)) d = std::max(d, distance_inf(v, q));
  for (const auto& v : vertices(q)) d = std::max(d, distance_inf(v, p));
  return d;
}

Vector vertex_centroid(const Polytope& p) {
  const auto& vs = vertices(p);
  Vector c = Vector::Zero(p.dimension());
  for (const auto& v : vs) c += v;
  return c / static_cast<double>(vs.size());
}

Vector analytic_center(const Polytope& p) {
  Vector x = vertex_centroid(p);
  const int n = p.dimension();
  std::vector<const LinearConstraint*> ineq;
  for (const auto& c : p.constraints()) {
    if (c.relation == Relation::kEq) return x;
    ineq.push_back(&c);
  }
  auto slack_ok = [&](const Vector& y) {
    for (const auto* c : ineq) {
      if (c->offset - c->normal.dot(y) <= 0.0) return false;
    }
    return true;
  };
  if (!slack_ok(x)) return x;  // lower-dimensional
  auto barrier = [&](const Vector& y) {
    double f = 0.0;
    for (const auto* c : ineq) f -= std::log(c->offset - c->normal.dot(y));
    return f;
  };
  for (int iter = 0; iter < 100; ++iter) {
    Vector g = Vector::Zero(n);
    Matrix h = Matrix::Zero(n, n);
    for (const auto* c : ineq) {
      const double s = c->offset - c->normal.dot(x);
      g += c->normal / s;
      h += c->normal * c->normal.transpose() / (s * s);
    }
    const Vector step = -h.ldlt().solve(g);
    const double decrement = -g.dot(step);
    if (!(decrement > 1e-20)) break;
    double t = 1.0;
    const double f0 = barrier(x);
    while (t > 1e-12) {
      const Vector y = x + t * step;
      if (slack_ok(y) && barrier(y) <= f0 - 0.25 * t * decrement) {
        x = y;
        break;
      }
      t *= 0.5;
    }
    if (t <= 1e-12) break;
  }
  return x;
}

}  // namespace adha
