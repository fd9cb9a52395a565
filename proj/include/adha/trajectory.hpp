#pragma once

#include <vector>

#include "adha/dynamics.hpp"

namespace adha {

/// Sampled signal: strictly increasing times with states of a common dimension.
struct TimeSeries {
  std::vector<double> times;
  std::vector<Vector> states;

  std::size_t size() const { return times.size(); }
  int dimension() const { return states.empty() ? 0 : static_cast<int>(states[0].size()); }
  /// Throws EmptyInput, DimensionMismatch, NonFiniteInput or DataError.
  void validate() const;
  /// Samples [first, last] (inclusive), times unchanged.
  TimeSeries window(std::size_t first, std::size_t last) const;
};

/// Piecewise-affine trajectory given by switching times t_0 = 0 < ... < t_k,
/// one affine system per piece and the initial state. States at switching
/// times are derived by flowing through the pieces.
class PwaTrajectory {
 public:
  PwaTrajectory() = default;
  PwaTrajectory(std::vector<double> switch_times, std::vector<AffineDynamics> pieces, Vector x0);

  const std::vector<double>& switch_times() const { return switch_times_; }
  const std::vector<AffineDynamics>& pieces() const { return pieces_; }
  const Vector& initial_state() const { return x0_; }

  std::size_t num_pieces() const { return pieces_.size(); }
  int dimension() const { return static_cast<int>(x0_.size()); }
  double duration() const { return switch_times_.empty() ? 0.0 : switch_times_.back(); }
  double piece_duration(std::size_t i) const { return switch_times_[i + 1] - switch_times_[i]; }
  /// State at switch time t_i (i = 0..k).
  const Vector& state_at_switch(std::size_t i) const { return switch_states_[i]; }

  /// Index of the piece whose interval contains t (the earlier piece at a
  /// switching time).
  std::size_t piece_index(double t) const;

 private:
  std::vector<double> switch_times_;
  std::vector<AffineDynamics> pieces_;
  Vector x0_;
  std::vector<Vector> switch_states_;
};

Vector evaluate(const PwaTrajectory& f, double t);

/// Trajectory over [0, b - a] following f on [a, b].
PwaTrajectory restrict(const PwaTrajectory& f, double a, double b);

/// Pieces [first, last) as a trajectory starting at t = 0.
PwaTrajectory sub_trajectory(const PwaTrajectory& f, std::size_t first, std::size_t last);

/// epsilon-tube around a trajectory.
struct Tube {
  PwaTrajectory trajectory;
  double epsilon = 0.0;

  Box at(double t) const { return {evaluate(trajectory, t), epsilon}; }
};

inline Box tube_at(const Tube& tube, double t) { return tube.at(t); }

/// Maximum infinity-norm deviation between f and the samples of s.
double max_deviation(const PwaTrajectory& f, const TimeSeries& s);

bool delta_captures(const PwaTrajectory& f, const TimeSeries& s, double delta);

}  // namespace adha
