#include "adha/trajectory.hpp"

#include <algorithm>
#include <cmath>

namespace adha {
namespace {

double domain_slack(double span) { return 1e-9 * std::max(1.0, std::abs(span)); }

}  // namespace

void TimeSeries::validate() const {
  if (times.empty()) throw EmptyInput("time series has no samples");
  if (times.size() != states.size()) throw DataError("time series: times and states differ in length");
  const auto n = states[0].size();
  if (n == 0) throw DimensionMismatch("time series: zero-dimensional state");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (states[i].size() != n) throw DimensionMismatch("time series: inconsistent state dimension");
    if (!std::isfinite(times[i]) || !states[i].allFinite()) {
      throw NonFiniteInput("time series: non-finite sample");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DataError("time series: times must be strictly increasing");
    }
  }
}

TimeSeries TimeSeries::window(std::size_t first, std::size_t last) const {
  TimeSeries w;
  w.times.assign(times.begin() + first, times.begin() + last + 1);
  w.states.assign(states.begin() + first, states.begin() + last + 1);
  return w;
}

PwaTrajectory::PwaTrajectory(std::vector<double> switch_times, std::vector<AffineDynamics> pieces,
                             Vector x0)
    : switch_times_(std::move(switch_times)), pieces_(std::move(pieces)), x0_(std::move(x0)) {
  if (switch_times_.size() != pieces_.size() + 1) {
    throw DataError("trajectory: need exactly one more switching time than pieces");
  }
  if (switch_times_[0] != 0.0) throw DataError("trajectory: first switching time must be 0");
  if (!x0_.allFinite()) throw NonFiniteInput("trajectory: non-finite initial state");
  for (std::size_t i = 1; i < switch_times_.size(); ++i) {
    if (!std::isfinite(switch_times_[i]) || !(switch_times_[i] > switch_times_[i - 1])) {
      throw DataError("trajectory: switching times must be strictly increasing");
    }
  }
  switch_states_.reserve(switch_times_.size());
  switch_states_.push_back(x0_);
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    pieces_[i].validate();
    if (pieces_[i].dimension() != x0_.size()) throw DimensionMismatch("trajectory: piece dimension");
    switch_states_.push_back(flow(pieces_[i], switch_states_.back(), piece_duration(i)));
  }
}

std::size_t PwaTrajectory::piece_index(double t) const {
  const double slack = domain_slack(duration());
  if (pieces_.empty() || !(t >= -slack) || !(t <= duration() + slack)) {
    throw OutOfDomain("trajectory: time " + std::to_string(t) + " outside [0, " +
                      std::to_string(duration()) + "]");
  }
  const auto it = std::lower_bound(switch_times_.begin() + 1, switch_times_.end(), t);
  const auto idx = static_cast<std::size_t>(it - switch_times_.begin()) - 1;
  return std::min(idx, pieces_.size() - 1);
}

Vector evaluate(const PwaTrajectory& f, double t) {
  const std::size_t i = f.piece_index(t);
  const double local = std::max(0.0, t - f.switch_times()[i]);
  return flow(f.pieces()[i], f.state_at_switch(i), local);
}

PwaTrajectory restrict(const PwaTrajectory& f, double a, double b) {
  const double slack = domain_slack(f.duration());
  if (!(a >= -slack) || !(b <= f.duration() + slack) || !(a < b)) {
    throw OutOfDomain("restrict: invalid interval");
  }
  const std::size_t first = f.piece_index(a);
  std::vector<double> times{0.0};
  std::vector<AffineDynamics> pieces;
  for (std::size_t i = first; i < f.num_pieces(); ++i) {
    const double end = std::min(b, f.switch_times()[i + 1]);
    if (end - a <= times.back()) continue;
    pieces.push_back(f.pieces()[i]);
    times.push_back(end - a);
    if (end >= b) break;
  }
  return {std::move(times), std::move(pieces), evaluate(f, a)};
}

PwaTrajectory sub_trajectory(const PwaTrajectory& f, std::size_t first, std::size_t last) {
  if (first >= last || last > f.num_pieces()) throw OutOfDomain("sub_trajectory: invalid range");
  std::vector<double> times{0.0};
  std::vector<AffineDynamics> pieces;
  for (std::size_t i = first; i < last; ++i) {
    pieces.push_back(f.pieces()[i]);
    times.push_back(f.switch_times()[i + 1] - f.switch_times()[first]);
  }
  return {std::move(times), std::move(pieces), f.state_at_switch(first)};
}

double max_deviation(const PwaTrajectory& f, const TimeSeries& s) {
  if (s.dimension() != f.dimension()) throw DimensionMismatch("max_deviation: dimension");
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    worst = std::max(worst, (s.states[i] - evaluate(f, s.times[i])).cwiseAbs().maxCoeff());
  }
  return worst;
}

bool delta_captures(const PwaTrajectory& f, const TimeSeries& s, double delta) {
  return max_deviation(f, s) <= delta;
}

}  // namespace adha
