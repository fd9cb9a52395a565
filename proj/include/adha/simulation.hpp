#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adha/automaton.hpp"

namespace adha {

struct SimConfig {
  int path_length = 6;
  double max_dwell = 7.0;
  double time_step = 0.05;
  double max_perturbation = 0.001;
  std::uint64_t seed = 0;
  /// Restricts the initial location (otherwise uniform over locations).
  std::optional<std::string> initial_location;
  /// Restricts the initial state (intersected with the invariant).
  std::optional<Polytope> initial_set;

  void validate() const;
};

/// A sampled execution. Pieces of `execution` carry the perturbed dynamics;
/// `nominal` holds the unperturbed flow of each visited location.
struct SimulatedExecution {
  Execution execution;
  std::vector<AffineDynamics> nominal;
};

/// Random execution of h. Stream `stream` selects an independent random
/// sequence for the same seed. Throws EmptyInvariant.
SimulatedExecution sample_execution(const Adha& h, const SimConfig& cfg, std::uint64_t stream = 0);

/// The execution's trajectory with perturbed (default) or nominal dynamics.
PwaTrajectory to_pwa(const SimulatedExecution& e, bool record_perturbed = true);

/// `count` executions with streams 0..count-1; execution 0 is unperturbed
/// when first_unperturbed is set.
std::vector<SimulatedExecution> sample_corpus(const Adha& h, const SimConfig& cfg, int count,
                                              bool first_unperturbed = true);

}  // namespace adha
