#pragma once

#include <optional>
#include <string>
#include <vector>

#include "adha/trajectory.hpp"

namespace adha {

struct Location {
  std::string name;
  AffineDynamics flow;
  Polytope invariant;
};

struct Transition {
  std::string from;
  std::string to;
  Polytope guard;
};

/// Sequence of location names; consecutive pairs must be transitions.
using Path = std::vector<std::string>;

/// Hybrid automaton with affine dynamics. Locations keep insertion order,
/// which fixes the order of children during synthesis.
class Adha {
 public:
  Adha() = default;
  explicit Adha(int dimension) : dimension_(dimension) {}

  int dimension() const { return dimension_; }
  const std::vector<Location>& locations() const { return locations_; }
  const std::vector<Transition>& transitions() const { return transitions_; }

  /// Throws UnknownLocation.
  const Location& location(const std::string& name) const;
  const Location* find_location(const std::string& name) const;
  const Transition* find_transition(const std::string& from, const std::string& to) const;

  /// Appends a location (no validation beyond dimension checks).
  void add_location(Location loc);
  /// Adds or replaces the transition from -> to.
  void set_transition(Transition t);
  void set_invariant(const std::string& name, Polytope invariant);

  /// Unused name of the form q<N>.
  std::string fresh_name() const;

  /// Location whose flow equals d within tol, if any.
  const Location* find_flow(const AffineDynamics& d, double tol = 1e-9) const;

 private:
  int dimension_ = 0;
  std::vector<Location> locations_;
  std::vector<Transition> transitions_;
};

struct Execution {
  PwaTrajectory trajectory;
  Path path;
};

/// Human-readable well-formedness violations (empty when well formed).
std::vector<std::string> validate(const Adha& h);

/// True iff the path is a path of h.
bool is_path(const Adha& h, const Path& path);

/// Checks that every piece uses the flow of its location exactly, that the
/// state stays in the invariant on a grid of pitch `grid` and at the piece
/// ends, and that switching states lie in the guards. Containment uses
/// absolute tolerance tol. Throws PathLengthMismatch.
bool check_execution(const Adha& h, const Execution& e, double tol = 1e-9, double grid = 0.01);

/// Edit counts of one q-update.
struct UpdateCounts {
  int new_locations = 0;
  int new_transitions = 0;
  int modified_constraints = 0;
};

struct QUpdate {
  Adha automaton;
  std::string location;  // name of the (possibly fresh) target location
  UpdateCounts counts;
};

/// Appends location q (existing name, or fresh when q is nullopt) to the
/// path: widens or creates the invariant with R_I and, when the path is
/// nonempty, the guard from last(path) to q with R_G. Fresh locations get
/// `dynamics` as flow. Throws InjectivityViolation when a fresh location
/// would duplicate an existing flow, and UnknownLocation for bad names.
QUpdate q_update(const Adha& h, const Path& path, const std::optional<std::string>& q,
                 const Polytope& r_inv, const Polytope& r_guard, const AffineDynamics& dynamics);

}  // namespace adha
