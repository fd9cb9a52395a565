#include <doctest.h>

#include "adha/automaton.hpp"

using namespace adha;

namespace {

Polytope interval(double lo, double hi) {
  return Polytope::box(Vector::Constant(1, lo), Vector::Constant(1, hi));
}

AffineDynamics scalar(double a, double b) {
  return AffineDynamics(Matrix::Constant(1, 1, a), Vector::Constant(1, b));
}

double upper(const Polytope& p) { return bounding_box(p).second(0); }
double lower(const Polytope& p) { return bounding_box(p).first(0); }

}  // namespace

TEST_SUITE("automaton") {
  TEST_CASE("first update creates a location and nothing else") {
    const Adha empty(1);
    const QUpdate u = q_update(empty, {}, std::nullopt, interval(18, 20), interval(18, 18.2),
                               scalar(-0.1, 3));
    CHECK(u.location == "q1");
    CHECK(u.counts.new_locations == 1);
    CHECK(u.counts.new_transitions == 0);
    CHECK(u.counts.modified_constraints == 0);
    REQUIRE(u.automaton.locations().size() == 1);
    CHECK(u.automaton.transitions().empty());
    CHECK(upper(u.automaton.location("q1").invariant) == doctest::Approx(20));
  }

  TEST_CASE("switching to a fresh location adds a transition with the guard region") {
    Adha h(1);
    h.add_location({"q1", scalar(-0.1, 3), interval(18, 21)});
    const QUpdate u = q_update(h, {"q1"}, std::nullopt, interval(19, 22), interval(20.9, 21.1),
                               scalar(-0.1, 0));
    CHECK(u.location == "q2");
    CHECK(u.counts.new_locations == 1);
    CHECK(u.counts.new_transitions == 1);
    CHECK(u.counts.modified_constraints == 0);
    const Transition* t = u.automaton.find_transition("q1", "q2");
    REQUIRE(t != nullptr);
    CHECK(lower(t->guard) == doctest::Approx(20.9));
  }

  TEST_CASE("widening counts one per strictly enlarged constraint set") {
    Adha h(1);
    h.add_location({"q1", scalar(-0.1, 3), interval(18, 21)});
    h.add_location({"q2", scalar(-0.1, 0), interval(18, 22)});
    h.set_transition({"q1", "q2", interval(20.9, 21.1)});

    // Already contained: no modification at all.
    QUpdate same = q_update(h, {"q1"}, std::string("q2"), interval(19, 21), interval(21, 21.05),
                            scalar(0, 0));
    CHECK(same.counts.modified_constraints == 0);
    CHECK(same.counts.new_transitions == 0);

    // Invariant and guard both grow.
    QUpdate grow = q_update(h, {"q1"}, std::string("q2"), interval(17.5, 21), interval(21, 21.3),
                            scalar(0, 0));
    CHECK(grow.counts.modified_constraints == 2);
    CHECK(lower(grow.automaton.location("q2").invariant) == doctest::Approx(17.5));
    CHECK(upper(grow.automaton.find_transition("q1", "q2")->guard) == doctest::Approx(21.3));

    // A transition that does not exist yet is new, its guard is not counted.
    QUpdate back = q_update(h, {"q2"}, std::string("q1"), interval(18, 19), interval(18.9, 19.1),
                            scalar(0, 0));
    CHECK(back.counts.new_transitions == 1);
    CHECK(back.counts.modified_constraints == 0);
  }

  TEST_CASE("fresh location with a duplicate flow is rejected") {
    Adha h(1);
    h.add_location({"q1", scalar(-0.1, 3), interval(18, 21)});
    CHECK_THROWS_AS(q_update(h, {"q1"}, std::nullopt, interval(18, 19), interval(18, 19), scalar(-0.1, 3)),
                    InjectivityViolation);
    CHECK_THROWS_AS(q_update(h, {"q1"}, std::string("zz"), interval(18, 19), interval(18, 19), scalar(0, 0)),
                    UnknownLocation);
    CHECK(h.find_flow(scalar(-0.1, 3)) != nullptr);
    CHECK(h.find_flow(scalar(-0.1, 3.01)) == nullptr);
    CHECK(h.fresh_name() == "q2");
  }

  TEST_CASE("validation reports structural problems") {
    Adha h(1);
    h.add_location({"a", scalar(-1, 0), interval(0, 1)});
    h.add_location({"b", scalar(-1, 0), interval(0, 1)});
    h.set_transition({"a", "c", interval(0, 1)});
    const auto issues = validate(h);
    CHECK(issues.size() == 2);  // shared flow, dangling transition
    CHECK(is_path(h, {"a"}));
    CHECK_FALSE(is_path(h, {"a", "b"}));
  }

  TEST_CASE("execution check follows flows, invariants and guards") {
    Adha h(1);
    h.add_location({"on", scalar(-0.1, 3), interval(18, 22)});
    h.add_location({"off", scalar(-0.1, 0), interval(18, 22)});
    h.set_transition({"on", "off", interval(21, 22)});
    h.set_transition({"off", "on", interval(18, 19)});
    // From 19, heating reaches 30 - 11 e^{-0.1 t}; it passes 21 at t ~ 1.99.
    const double t1 = 2.5;
    const PwaTrajectory f({0.0, t1, t1 + 1.0}, {scalar(-0.1, 3), scalar(-0.1, 0)},
                          Vector::Constant(1, 19.0));
    CHECK(check_execution(h, {f, {"on", "off"}}));
    CHECK_FALSE(check_execution(h, {f, {"off", "on"}}));
    const PwaTrajectory early({0.0, 1.0, 2.0}, {scalar(-0.1, 3), scalar(-0.1, 0)},
                              Vector::Constant(1, 19.0));
    CHECK_FALSE(check_execution(h, {early, {"on", "off"}}));  // guard not reached
    CHECK_THROWS_AS(check_execution(h, {f, {"on"}}), PathLengthMismatch);
  }
}
