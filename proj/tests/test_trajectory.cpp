#include <doctest.h>

#include "adha/trajectory.hpp"
#include "oracles.hpp"

using namespace adha;

namespace {

// x' = 1 on [0, 1], then x' = -x on [1, 3], from x0 = 0.
PwaTrajectory ramp_then_decay() {
  const AffineDynamics up(Matrix::Zero(1, 1), Vector::Constant(1, 1.0));
  const AffineDynamics down(Matrix::Constant(1, 1, -1.0), Vector::Zero(1));
  return {{0.0, 1.0, 3.0}, {up, down}, Vector::Zero(1)};
}

double closed_form(double t) { return t <= 1.0 ? t : std::exp(-(t - 1.0)); }

}  // namespace

TEST_SUITE("trajectory") {
  TEST_CASE("evaluation follows the pieces and is continuous at switches") {
    const PwaTrajectory f = ramp_then_decay();
    CHECK(f.num_pieces() == 2);
    CHECK(f.duration() == 3.0);
    for (double t : {0.0, 0.3, 1.0, 1.0 + 1e-12, 2.2, 3.0}) {
      CHECK(evaluate(f, t)(0) == doctest::Approx(closed_form(t)).epsilon(1e-12));
    }
    CHECK(f.state_at_switch(2)(0) == doctest::Approx(std::exp(-2.0)));
    CHECK(f.piece_index(1.0) == 0);
    CHECK(f.piece_index(1.5) == 1);
    CHECK_THROWS_AS(f.piece_index(3.1), OutOfDomain);
    CHECK_THROWS_AS(evaluate(f, -0.5), OutOfDomain);
  }

  TEST_CASE("restriction and sub-trajectories shift time to zero") {
    const PwaTrajectory f = ramp_then_decay();
    const PwaTrajectory r = restrict(f, 0.5, 2.0);
    CHECK(r.num_pieces() == 2);
    CHECK(r.duration() == doctest::Approx(1.5));
    for (double t : {0.0, 0.4, 0.5, 1.2, 1.5}) {
      CHECK(evaluate(r, t)(0) == doctest::Approx(closed_form(t + 0.5)).epsilon(1e-12));
    }
    const PwaTrajectory inner = restrict(f, 1.2, 1.8);
    CHECK(inner.num_pieces() == 1);
    const PwaTrajectory s = sub_trajectory(f, 1, 2);
    CHECK(s.num_pieces() == 1);
    CHECK(s.initial_state()(0) == doctest::Approx(1.0));
    CHECK(s.duration() == doctest::Approx(2.0));
  }

  TEST_CASE("constructor rejects malformed input") {
    const AffineDynamics d(Matrix::Zero(1, 1), Vector::Zero(1));
    CHECK_THROWS_AS(PwaTrajectory({0.0, 1.0, 2.0}, {d}, Vector::Zero(1)), DataError);
    CHECK_THROWS_AS(PwaTrajectory({0.5, 1.0}, {d}, Vector::Zero(1)), DataError);
    CHECK_THROWS_AS(PwaTrajectory({0.0, 1.0, 1.0}, {d, d}, Vector::Zero(1)), DataError);
    CHECK_THROWS_AS(PwaTrajectory({0.0, 1.0}, {d}, Vector::Zero(2)), DimensionMismatch);
  }

  TEST_CASE("tube boxes and sample deviation") {
    const PwaTrajectory f = ramp_then_decay();
    const Tube tube{f, 0.1};
    const Box b = tube.at(0.5);
    CHECK(b.radius == 0.1);
    CHECK(b.contains(Vector::Constant(1, 0.59)));
    CHECK_FALSE(b.contains(Vector::Constant(1, 0.61)));

    TimeSeries s;
    for (int i = 0; i <= 30; ++i) {
      s.times.push_back(0.1 * i);
      s.states.push_back(Vector::Constant(1, closed_form(0.1 * i) + (i == 7 ? 0.05 : 0.0)));
    }
    CHECK(max_deviation(f, s) == doctest::Approx(0.05));
    CHECK(delta_captures(f, s, 0.05 + 1e-12));
    CHECK_FALSE(delta_captures(f, s, 0.049));
  }

  TEST_CASE("time series validation") {
    TimeSeries s;
    CHECK_THROWS_AS(s.validate(), EmptyInput);
    s.times = {0.0, 0.0};
    s.states = {Vector::Zero(1), Vector::Zero(1)};
    CHECK_THROWS_AS(s.validate(), DataError);
    s.times = {0.0, 1.0};
    s.states[1] = Vector::Zero(2);
    CHECK_THROWS_AS(s.validate(), DimensionMismatch);
    s.states[1] = Vector::Constant(1, INFINITY);
    CHECK_THROWS_AS(s.validate(), NonFiniteInput);
    const TimeSeries ok{{0.0, 1.0, 2.0}, {Vector::Zero(1), Vector::Ones(1), Vector::Zero(1)}};
    CHECK(ok.window(1, 2).size() == 2);
  }
}
