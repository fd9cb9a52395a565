#include <doctest.h>

#include <cmath>

#include "adha/models.hpp"

using namespace adha;

TEST_SUITE("simulation") {
  TEST_CASE("same seed and stream give the same execution, streams differ") {
    const Adha h = heater_model();
    const SimConfig cfg = heater_sim_config(11);
    const auto a = sample_execution(h, cfg, 4);
    const auto b = sample_execution(h, cfg, 4);
    const auto c = sample_execution(h, cfg, 5);
    CHECK(a.execution.path == b.execution.path);
    CHECK(a.execution.trajectory.switch_times() == b.execution.trajectory.switch_times());
    CHECK(a.execution.trajectory.initial_state() == b.execution.trajectory.initial_state());
    CHECK(a.execution.trajectory.initial_state() != c.execution.trajectory.initial_state());
  }

  TEST_CASE("unperturbed executions are executions of the model") {
    const Adha h = heater_model();
    SimConfig cfg = heater_sim_config(2);
    cfg.max_perturbation = 0.0;
    for (std::uint64_t s = 0; s < 30; ++s) {
      const auto e = sample_execution(h, cfg, s);
      CHECK(check_execution(h, e.execution, 1e-9));
    }
    const Adha g = gearbox_model();
    SimConfig gc = gearbox_sim_config(2);
    gc.max_perturbation = 0.0;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto e = sample_execution(g, gc, s);
      CHECK(check_execution(g, e.execution, 1e-9));
    }
  }

  TEST_CASE("perturbed corpora respect the protocol") {
    const Adha h = heater_model();
    const SimConfig cfg = heater_sim_config(9);
    const auto runs = sample_corpus(h, cfg, 25);
    REQUIRE(runs.size() == 25);
    // The first execution is unperturbed.
    const auto& first = runs[0];
    for (std::size_t i = 0; i < first.nominal.size(); ++i) {
      CHECK(first.execution.trajectory.pieces()[i].distance(first.nominal[i]) == 0.0);
    }
    for (const auto& r : runs) {
      const auto& f = r.execution.trajectory;
      CHECK(is_path(h, r.execution.path));
      CHECK(f.num_pieces() <= static_cast<std::size_t>(cfg.path_length));
      CHECK(f.num_pieces() == r.execution.path.size());
      for (std::size_t i = 0; i < f.num_pieces(); ++i) {
        CHECK(f.pieces()[i].distance(r.nominal[i]) <= cfg.max_perturbation);
        const double steps = f.piece_duration(i) / cfg.time_step;
        CHECK(std::abs(steps - std::round(steps)) < 1e-6);
        CHECK(f.piece_duration(i) <= cfg.max_dwell + 1e-9);
      }
      const double x0 = f.initial_state()(0);
      CHECK(x0 >= 18.0);
      CHECK(x0 <= 22.0);
    }
    // Nominal recording keeps times and the initial state.
    const PwaTrajectory nominal = to_pwa(runs[3], false);
    CHECK(nominal.switch_times() == runs[3].execution.trajectory.switch_times());
  }

  TEST_CASE("gearbox executions start in the first gear and shift upwards in order") {
    const auto runs = sample_corpus(gearbox_model(), gearbox_sim_config(1), 10);
    for (const auto& r : runs) {
      const Vector& x0 = r.execution.trajectory.initial_state();
      CHECK(x0(0) >= 26.0);
      CHECK(x0(0) <= 28.0);
      CHECK(x0(1) == 0.0);
      const Path expect{"g1", "g2", "g3", "g4"};
      REQUIRE(r.execution.path.size() <= expect.size());
      for (std::size_t i = 0; i < r.execution.path.size(); ++i) CHECK(r.execution.path[i] == expect[i]);
    }
  }

  TEST_CASE("configuration errors") {
    SimConfig bad;
    bad.time_step = 0.0;
    CHECK_THROWS_AS(bad.validate(), DataError);
    CHECK_THROWS_AS(sample_execution(Adha(1), SimConfig{}), EmptyInvariant);
    SimConfig nowhere = heater_sim_config(0);
    nowhere.initial_set = Polytope::box(Vector::Constant(1, 50.0), Vector::Constant(1, 60.0));
    CHECK_THROWS_AS(sample_execution(heater_model(), nowhere), EmptyInvariant);
  }
}
