#include "adha/simulation.hpp"

#include <random>

namespace adha {
namespace {

constexpr int kMaxInitialAttempts = 10000;

class Sampler {
 public:
  Sampler(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{seed, stream};
    rng_.seed(seq);
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
  }

  AffineDynamics perturb(const AffineDynamics& d, double p) {
    if (p <= 0.0) return d;
    AffineDynamics out = d;
    for (Eigen::Index i = 0; i < out.matrix.rows(); ++i) {
      for (Eigen::Index j = 0; j < out.matrix.cols(); ++j) {
        if (out.matrix(i, j) != 0.0) out.matrix(i, j) += uniform(-p, p);
      }
    }
    for (Eigen::Index i = 0; i < out.offset.size(); ++i) {
      if (out.offset(i) != 0.0) out.offset(i) += uniform(-p, p);
    }
    return out;
  }

  Vector point_in(const Polytope& p) {
    if (is_empty(p)) throw EmptyInvariant("cannot sample from an empty set");
    const auto [lo, hi] = bounding_box(p);
    for (int attempt = 0; attempt < kMaxInitialAttempts; ++attempt) {
      Vector x(lo.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = lo(i) < hi(i) ? uniform(lo(i), hi(i)) : lo(i);
      if (p.contains(x)) return x;
    }
    throw EmptyInvariant("no initial state found after " + std::to_string(kMaxInitialAttempts) +
                         " attempts");
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace

void SimConfig::validate() const {
  if (path_length < 1 || !(max_dwell > 0.0) || !(time_step > 0.0) || !(max_perturbation >= 0.0)) {
    throw DataError("simulation: path length, dwell time and time step must be positive");
  }
}

namespace {

// One attempt; nullopt when the initial state leaves its invariant at the
// first time step.
std::optional<SimulatedExecution> try_execution(const Adha& h, const SimConfig& cfg, Sampler& rng) {
  const Location* q = cfg.initial_location ? &h.location(*cfg.initial_location)
                                           : &h.locations()[rng.index(h.locations().size())];
  Polytope start = q->invariant;
  if (cfg.initial_set) start = intersect(start, *cfg.initial_set);
  Vector x = rng.point_in(start);

  std::vector<double> times{0.0};
  std::vector<AffineDynamics> pieces;
  SimulatedExecution out;
  const auto max_steps = static_cast<int>(std::floor(cfg.max_dwell / cfg.time_step + 1e-9));

  const Vector x0 = x;
  for (int piece = 0; piece < cfg.path_length; ++piece) {
    const AffineDynamics dyn = rng.perturb(q->flow, cfg.max_perturbation);
    const AffineMap step = flow_map(dyn, cfg.time_step);
    std::vector<Vector> states{x};
    std::vector<std::pair<const Transition*, int>> enabled;
    for (int k = 1; k <= max_steps; ++k) {
      Vector next = step.apply(states.back());
      if (!q->invariant.contains(next)) break;
      states.push_back(std::move(next));
      for (const auto& t : h.transitions()) {
        if (t.from == q->name && t.guard.contains(states.back())) enabled.emplace_back(&t, k);
      }
    }
    const int dwell_steps = static_cast<int>(states.size()) - 1;
    if (dwell_steps == 0) break;  // the state leaves the invariant immediately
    const bool last = piece + 1 == cfg.path_length;
    int k = dwell_steps;
    const Transition* taken = nullptr;
    if (!enabled.empty()) {
      const auto& choice = enabled[rng.index(enabled.size())];
      k = choice.second;
      if (!last) taken = choice.first;
    }
    pieces.push_back(dyn);
    out.nominal.push_back(q->flow);
    out.execution.path.push_back(q->name);
    times.push_back(times.back() + k * cfg.time_step);
    x = states[k];
    if (taken == nullptr) break;
    q = &h.location(taken->to);
  }
  if (pieces.empty()) return std::nullopt;
  out.execution.trajectory = PwaTrajectory(std::move(times), std::move(pieces), x0);
  return out;
}

}  // namespace

SimulatedExecution sample_execution(const Adha& h, const SimConfig& cfg, std::uint64_t stream) {
  cfg.validate();
  if (h.locations().empty()) throw EmptyInvariant("simulation: automaton has no locations");
  Sampler rng(cfg.seed, stream);
  for (int attempt = 0; attempt < kMaxInitialAttempts; ++attempt) {
    if (auto e = try_execution(h, cfg, rng)) return std::move(*e);
  }
  throw EmptyInvariant("simulation: no initial state can evolve inside its invariant");
}

PwaTrajectory to_pwa(const SimulatedExecution& e, bool record_perturbed) {
  const auto& f = e.execution.trajectory;
  if (record_perturbed) return f;
  return {f.switch_times(), e.nominal, f.initial_state()};
}

std::vector<SimulatedExecution> sample_corpus(const Adha& h, const SimConfig& cfg, int count,
                                              bool first_unperturbed) {
  std::vector<SimulatedExecution> out;
  out.reserve(static_cast<std::size_t>(std::max(0, count)));
  for (int i = 0; i < count; ++i) {
    SimConfig c = cfg;
    if (i == 0 && first_unperturbed) c.max_perturbation = 0.0;
    out.push_back(sample_execution(h, c, static_cast<std::uint64_t>(i)));
  }
  return out;
}

}  // namespace adha
