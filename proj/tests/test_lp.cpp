#include <doctest.h>

#include <random>

#include "adha/lp.hpp"
#include "oracles.hpp"

using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_SUITE("lp") {
  TEST_CASE("box maximum sits at the corner picked by the objective signs") {
    MatrixXd a(4, 2);
    a << 1, 0, -1, 0, 0, 1, 0, -1;
    VectorXd b(4);
    b << 2, 1, 3, 4;  // -1 <= x <= 2, -4 <= y <= 3
    VectorXd c(2);
    c << 1, -2;
    const auto r = adha::lp::maximize(c, a, b, MatrixXd(0, 2), VectorXd(0));
    REQUIRE(r.status == adha::lp::Status::kOptimal);
    CHECK(r.value == doctest::Approx(2 + 8));
    CHECK(r.x(0) == doctest::Approx(2));
    CHECK(r.x(1) == doctest::Approx(-4));
  }

  TEST_CASE("infeasible and unbounded programs are reported") {
    MatrixXd a(2, 1);
    a << 1, -1;
    VectorXd b(2);
    b << 0, -1;  // x <= 0 and x >= 1
    VectorXd c = VectorXd::Ones(1);
    CHECK(adha::lp::maximize(c, a, b, MatrixXd(0, 1), VectorXd(0)).status ==
          adha::lp::Status::kInfeasible);
    CHECK_FALSE(adha::lp::feasible(a, b, MatrixXd(0, 1), VectorXd(0)));

    MatrixXd a2(1, 1);
    a2 << -1;
    VectorXd b2(1);
    b2 << 0;  // x >= 0
    CHECK(adha::lp::maximize(c, a2, b2, MatrixXd(0, 1), VectorXd(0)).status ==
          adha::lp::Status::kUnbounded);
  }

  TEST_CASE("equality rows restrict the optimum to a line") {
    MatrixXd a(4, 2);
    a << 1, 0, -1, 0, 0, 1, 0, -1;
    VectorXd b = VectorXd::Ones(4);
    MatrixXd e(1, 2);
    e << 1, 1;
    VectorXd f(1);
    f << 0.5;
    VectorXd c(2);
    c << 1, 0;
    const auto r = adha::lp::maximize(c, a, b, e, f);
    REQUIRE(r.status == adha::lp::Status::kOptimal);
    CHECK(r.value == doctest::Approx(1.0));
    CHECK(r.x(1) == doctest::Approx(-0.5));
  }

  TEST_CASE("random polygons: LP optimum equals the best vertex") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int trial = 0; trial < 200; ++trial) {
      const auto poly = oracle::random_polygon(rng, 7);
      if (poly.vertices.size() < 3) continue;
      MatrixXd a(static_cast<Eigen::Index>(poly.normals.size()), 2);
      VectorXd b(a.rows());
      for (std::size_t i = 0; i < poly.normals.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)) = poly.normals[i].transpose();
        b(static_cast<Eigen::Index>(i)) = poly.offsets[i];
      }
      VectorXd c(2);
      c << g(rng), g(rng);
      double best = -1e300;
      for (const auto& v : poly.vertices) best = std::max(best, c.dot(v));
      const auto r = adha::lp::maximize(c, a, b, MatrixXd(0, 2), VectorXd(0));
      REQUIRE(r.status == adha::lp::Status::kOptimal);
      CHECK(r.value == doctest::Approx(best).epsilon(1e-9));
    }
  }
}
