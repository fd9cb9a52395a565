#include <doctest.h>

#include "adha/io.hpp"
#include "adha/models.hpp"

using namespace adha;

TEST_SUITE("io") {
  TEST_CASE("automaton JSON round-trips exactly") {
    for (const Adha& h : {heater_model(), gearbox_model()}) {
      const io::Json j = io::to_json(h);
      const Adha back = io::adha_from_json(j);
      CHECK(io::to_json(back).dump() == j.dump());
      REQUIRE(back.locations().size() == h.locations().size());
      CHECK(back.locations()[0].name == h.locations()[0].name);
    }
  }

  TEST_CASE("trajectory JSON round-trips with shortest doubles") {
    const auto run = sample_execution(heater_model(), heater_sim_config(1), 3);
    const PwaTrajectory f = to_pwa(run);
    const io::Json j = io::to_json(f);
    const PwaTrajectory back = io::trajectory_from_json(io::Json::parse(j.dump()));
    CHECK(back.switch_times() == f.switch_times());
    CHECK(back.initial_state() == f.initial_state());
    for (std::size_t i = 0; i < f.num_pieces(); ++i) {
      CHECK(back.pieces()[i].matrix == f.pieces()[i].matrix);
      CHECK(back.pieces()[i].offset == f.pieces()[i].offset);
    }
    CHECK(io::Json(0.1).dump() == "0.1");
  }

  TEST_CASE("series CSV parse and emit") {
    const std::string text = "t,x1,x2\n0,1,2\n0.5,1.5,2.5\r\n1,2,3\n";
    const TimeSeries s = io::parse_series_csv(text);
    REQUIRE(s.size() == 3);
    CHECK(s.dimension() == 2);
    CHECK(s.states[1](1) == 2.5);
    const TimeSeries again = io::parse_series_csv(io::series_to_csv(s));
    CHECK(again.times == s.times);
    CHECK(again.states == s.states);
    CHECK_THROWS_AS(io::parse_series_csv(""), EmptyInput);
    CHECK_THROWS_AS(io::parse_series_csv("t,x1\n0,1,2\n"), DataError);
    CHECK_THROWS_AS(io::parse_series_csv("t,x1\n0,abc\n"), DataError);
    CHECK_THROWS_AS(io::parse_series_csv("t,x1\n1,0\n0,0\n"), DataError);
  }

  TEST_CASE("sampled trajectory CSV includes switching times") {
    const AffineDynamics up(Matrix::Zero(1, 1), Vector::Constant(1, 1.0));
    const PwaTrajectory f({0.0, 0.25, 1.0}, {up, up}, Vector::Zero(1));
    const TimeSeries s = io::parse_series_csv(io::trajectory_to_csv(f, 0.5));
    CHECK(s.times == std::vector<double>{0.0, 0.25, 0.5, 1.0});
    CHECK(s.states[3](0) == doctest::Approx(1.0));
  }

  TEST_CASE("malformed documents are data errors") {
    CHECK_THROWS_AS(io::adha_from_json(io::Json::parse(R"({"locations":{}})")), DataError);
    CHECK_THROWS_AS(io::adha_from_json(io::Json::parse(R"({"dimension":0,"locations":{}})")), DataError);
    CHECK_THROWS_AS(io::polytope_from_json(io::Json::parse(
                        R"({"constraints":[{"normal":[1],"offset":1,"relation":"ge"}]})")),
                    DataError);
    CHECK_THROWS_AS(io::trajectory_from_json(io::Json::parse(
                        R"({"switch_times":[0,1],"pieces":[{"A":[[0,1]],"b":[0]}],"x0":[0]})")),
                    DataError);
  }

  TEST_CASE("constraint CSV lists over and under sets per piece") {
    const Polytope box = Polytope::box(Vector::Zero(1), Vector::Ones(1));
    const std::string csv = io::sets_to_csv({{box, box}, {Polytope::empty(1), box}}, 1);
    CHECK(csv.rfind("piece,kind,index,relation,offset,a1\n", 0) == 0);
    std::size_t rows = 0;
    for (char c : csv) rows += c == '\n';
    CHECK(rows == 1 + 2 + 2 + 2);
  }
}
