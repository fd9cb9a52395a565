#include <doctest.h>

#include <random>

#include "adha/geometry.hpp"
#include "oracles.hpp"

using namespace adha;

namespace {

Vector v2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Polytope to_polytope(const oracle::Polygon& poly) {
  std::vector<LinearConstraint> cs;
  for (std::size_t i = 0; i < poly.normals.size(); ++i) cs.emplace_back(poly.normals[i], poly.offsets[i]);
  return Polytope(2, std::move(cs));
}

bool has_point(const std::vector<Vector>& pts, const Vector& x, double tol) {
  for (const auto& p : pts) {
    if ((p - x).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("geometry") {
  TEST_CASE("unit box has its four corners as vertices") {
    const Polytope b = Polytope::box(v2(0, 0), v2(1, 1));
    const auto& vs = vertices(b);
    CHECK(vs.size() == 4);
    for (auto c : {v2(0, 0), v2(1, 0), v2(0, 1), v2(1, 1)}) CHECK(has_point(vs, c, 1e-12));
    CHECK_FALSE(is_empty(b));
    CHECK(b.contains(v2(0.5, 0.5)));
    CHECK_FALSE(b.contains(v2(1.1, 0.5)));
  }

  TEST_CASE("empty and unbounded inputs") {
    std::vector<LinearConstraint> cs{{v2(1, 0), 0.0}, {v2(-1, 0), -1.0}};  // x <= 0, x >= 1
    CHECK(is_empty(Polytope(2, cs)));
    CHECK(is_empty(Polytope::empty(3)));
    std::vector<LinearConstraint> half{{v2(1, 0), 1.0}, {v2(-1, 0), 1.0}, {v2(0, 1), 1.0}};
    CHECK_THROWS_AS(vertices(Polytope(2, half)), UnboundedPolytope);
  }

  TEST_CASE("intervals and points") {
    Vector lo(1), hi(1);
    lo << -2;
    hi << 3;
    const auto& vs = vertices(Polytope::box(lo, hi));
    REQUIRE(vs.size() == 2);
    const Polytope p = Polytope::point(v2(1, 2));
    CHECK(vertices(p).size() == 1);
    CHECK(p.contains(v2(1, 2)));
  }

  TEST_CASE("convex hull of random points contains them and has hull vertices only") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<Vector> pts;
      for (int i = 0; i < 30; ++i) pts.push_back(v2(g(rng), g(rng)));
      const Polytope h = chull(pts);
      for (const auto& p : pts) CHECK(h.contains(p, 1e-9));
      for (const auto& v : vertices(h)) CHECK(has_point(pts, v, 1e-9));
    }
  }

  TEST_CASE("convex hull in three dimensions and of degenerate sets") {
    std::vector<Vector> cube;
    for (int m = 0; m < 8; ++m) {
      Vector x(3);
      x << (m & 1), (m >> 1) & 1, (m >> 2) & 1;
      cube.push_back(x);
    }
    Vector mid = Vector::Constant(3, 0.5);
    cube.push_back(mid);
    const Polytope h = chull(cube);
    CHECK(vertices(h).size() == 8);
    CHECK(is_subset(h, Polytope::box(Vector::Zero(3), Vector::Ones(3))));
    CHECK(is_subset(Polytope::box(Vector::Zero(3), Vector::Ones(3)), h));

    // Collinear points give a segment.
    const Polytope seg = chull(std::vector<Vector>{v2(0, 0), v2(1, 1), v2(2, 2)});
    CHECK(vertices(seg).size() == 2);
    CHECK(seg.contains(v2(1.5, 1.5)));
    CHECK_FALSE(seg.contains(v2(1.5, 1.4)));
  }

  TEST_CASE("contraction matches the distance-to-every-facet oracle") {
    // x is in P contracted by d iff every facet hyperplane is at Euclidean
    // distance at least d on the inner side.
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
      const auto poly = oracle::random_polygon(rng, 6);
      if (poly.vertices.size() < 3) continue;
      const Polytope p = to_polytope(poly);
      const double d = 0.05 + 0.2 * std::abs(u(rng)) / 4.0;
      const Polytope c = contract(p, d);
      for (int k = 0; k < 200; ++k) {
        const Vector x = v2(u(rng), u(rng));
        double slack = 1e300;
        for (std::size_t i = 0; i < poly.normals.size(); ++i) {
          slack = std::min(slack, (poly.offsets[i] - poly.normals[i].dot(x)) / poly.normals[i].norm());
        }
        if (std::abs(slack - d) < 1e-9) continue;
        CHECK(c.contains(x, 0.0) == (slack >= d));
      }
    }
  }

  TEST_CASE("intersection agrees with pointwise conjunction") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = oracle::random_polygon(rng, 6);
      const auto b = oracle::random_polygon(rng, 5);
      if (a.vertices.size() < 3 || b.vertices.size() < 3) continue;
      const Polytope pa = to_polytope(a), pb = to_polytope(b);
      const Polytope i = intersect(pa, pb);
      for (int k = 0; k < 100; ++k) {
        const Vector x = v2(u(rng), u(rng));
        CHECK(i.contains(x) == (pa.contains(x) && pb.contains(x)));
      }
      if (is_empty(i)) continue;
      for (const auto& v : vertices(i)) CHECK((pa.contains(v, 1e-7) && pb.contains(v, 1e-7)));
    }
  }

  TEST_CASE("support function equals the best vertex") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 100; ++trial) {
      const auto poly = oracle::random_polygon(rng, 8);
      if (poly.vertices.size() < 3) continue;
      const Vector d = v2(g(rng), g(rng));
      double best = -1e300;
      for (const auto& v : poly.vertices) best = std::max(best, d.dot(v));
      CHECK(support_function(to_polytope(poly), d) == doctest::Approx(best).epsilon(1e-9));
    }
  }

  TEST_CASE("template under/over sandwich on random polygons") {
    std::mt19937_64 rng(8);
    const auto dirs = octagonal_directions(2);
    CHECK(dirs.size() == 8);
    int checked = 0;
    while (checked < 500) {
      const auto poly = oracle::random_polygon(rng, 3 + static_cast<int>(rng() % 8));
      if (poly.vertices.size() < 3) continue;
      ++checked;
      const Polytope p = to_polytope(poly);
      const Polytope over = template_overapprox(p, dirs);
      const Polytope under = template_underapprox(p, dirs);
      REQUIRE(is_subset(p, over, 1e-9));
      if (!is_empty(under)) REQUIRE(is_subset(under, p, 1e-9));
    }
  }

  TEST_CASE("subset, bounding box and Hausdorff distance on boxes") {
    const Polytope a = Polytope::box(v2(0, 0), v2(2, 1));
    const Polytope b = Polytope::box(v2(-1, 0), v2(2, 3));
    CHECK(is_subset(a, b));
    CHECK_FALSE(is_subset(b, a));
    const auto [lo, hi] = bounding_box(b);
    CHECK(lo(0) == doctest::Approx(-1));
    CHECK(hi(1) == doctest::Approx(3));
    // Farthest point of b from a is (-1, 3), at inf-distance 2.
    CHECK(hausdorff_distance(a, b) == doctest::Approx(2.0));
    CHECK(distance_inf(v2(5, 5), a) == doctest::Approx(4.0));
    CHECK(distance_inf(v2(1, 0.5), a) == doctest::Approx(0.0));
  }

  TEST_CASE("centers lie inside and redundant constraints are dropped") {
    std::vector<LinearConstraint> cs{{v2(1, 0), 1}, {v2(-1, 0), 1}, {v2(0, 1), 1},
                                     {v2(0, -1), 1}, {v2(1, 1), 5}};
    const Polytope p(2, cs);
    const Polytope m = minimized(p);
    CHECK(m.constraints().size() == 4);
    CHECK(analytic_center(p).norm() < 0.2);
    CHECK(vertex_centroid(p).norm() < 1e-9);
  }

  TEST_CASE("canonical form normalises and merges parallel inequalities") {
    std::vector<LinearConstraint> cs{{v2(2, 0), 4}, {v2(1, 0), 3}, {v2(-1, 0), 0},
                                     {v2(0, 1), 1}, {v2(0, -1), 0}};
    const Polytope p(2, cs);
    for (const auto& c : p.constraints()) CHECK(c.normal.norm() == doctest::Approx(1.0));
    CHECK(p.constraints().size() == 4);
    CHECK(p.contains(v2(2, 0.5)));
    CHECK_FALSE(p.contains(v2(2.1, 0.5)));
  }
}
