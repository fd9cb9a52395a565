#include "adha/models.hpp"

namespace adha {
namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

Polytope vw_box(double vlo, double vhi, double wlo, double whi) {
  return Polytope::box(vec({vlo, wlo}), vec({vhi, whi}));
}

}  // namespace

Adha heater_model(double a) {
  Adha h(1);
  const Polytope range = Polytope::box(vec({18.0}), vec({22.0}));
  h.add_location({"on", AffineDynamics(Matrix::Constant(1, 1, -a), vec({30.0 * a})), range});
  h.add_location({"off", AffineDynamics(Matrix::Constant(1, 1, -a), vec({0.0})), range});
  h.set_transition({"on", "off", Polytope::box(vec({21.0}), vec({22.0}))});
  h.set_transition({"off", "on", Polytope::box(vec({18.0}), vec({19.0}))});
  return h;
}

SimConfig heater_sim_config(std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  return cfg;
}

Adha gearbox_model() {
  Adha h(2);
  const Vector zero = Vector::Zero(2);
  h.add_location({"g1", AffineDynamics(mat2(-0.1, 0.0, 0.07, 0.0), zero),
                  vw_box(19.8, 30.0, -1.0, 40.0)});
  h.add_location({"g2", AffineDynamics(mat2(-0.12, 0.0, 0.12, 0.0), zero),
                  vw_box(13.8, 23.0, -1.0, 40.0)});
  h.add_location({"g3", AffineDynamics(mat2(-0.2, 0.0, 0.3, 0.0), zero),
                  vw_box(4.8, 19.0, -1.0, 40.0)});
  h.add_location({"g4", AffineDynamics(mat2(0.0, -0.05, 0.0, 0.04), zero),
                  vw_box(-2.0, 13.0, -1.0, 40.0)});
  h.set_transition({"g1", "g2", vw_box(19.8, 20.0, -1.0, 40.0)});
  h.set_transition({"g2", "g3", vw_box(13.8, 14.0, -1.0, 40.0)});
  h.set_transition({"g3", "g4", vw_box(4.8, 5.0, -1.0, 40.0)});
  return h;
}

SimConfig gearbox_sim_config(std::uint64_t seed) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.max_perturbation = 0.0001;
  cfg.initial_location = "g1";
  cfg.initial_set = vw_box(26.0, 28.0, 0.0, 0.0);
  return cfg;
}

}  // namespace adha
