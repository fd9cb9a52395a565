#pragma once

#include <cstdint>
#include <optional>

#include "adha/trajectory.hpp"

namespace adha {

/// One fitted affine piece.
struct FitResult {
  AffineDynamics dynamics;
  Vector initial_state;
  /// max over the window of |s(t) - g(t)|_inf for the fitted solution g.
  double residual = 0.0;
};

struct FitOptions {
  int restarts = 200;
  int iterations = 500;
  std::uint64_t seed = 0;
  /// Worker threads for independent restarts (results do not depend on it).
  int threads = 1;
};

/// Fits x' = A x + b to the window by minimising the max-norm residual.
/// The window's first sample is time zero of the fitted solution. When x0 is
/// given it is kept fixed. Returns nullopt when no fit with residual <= delta
/// was found within the restart budget. Throws TooFewSamples.
std::optional<FitResult> fit_affine(const TimeSeries& window, const std::optional<Vector>& x0,
                                    double delta, const FitOptions& options = {});

/// Largest end index e such that samples [start, e] admit a fit, found by
/// trying the full suffix first and otherwise binary search.
/// Throws NoFeasiblePiece when even two samples cannot be fitted.
std::pair<std::size_t, FitResult> max_prefix(const TimeSeries& s, std::size_t start,
                                             const std::optional<Vector>& x0, double delta,
                                             const FitOptions& options = {});

/// Splits the series into maximal affine pieces. Switching times are sample
/// times relative to the first sample. The result delta-captures the
/// (time-shifted) series; this is re-checked before returning.
PwaTrajectory segment(const TimeSeries& s, double delta, const FitOptions& options = {});

}  // namespace adha
