#pragma once

#include <optional>
#include <vector>

#include "adha/automaton.hpp"

namespace adha {

struct MembershipOptions {
  /// Time samples per piece: max(min_samples, ceil(samples_per_unit * T)),
  /// unless fixed_samples is set.
  double samples_per_unit = 20.0;
  int min_samples = 10;
  std::optional<int> fixed_samples;
  /// Contraction step of the refinement; epsilon / 10 when unset.
  std::optional<double> contraction_delta;
  /// Pre-scan resolution of the point synchronisation check.
  int scan_points = 512;
  /// When contraction exhausts the over-approximation without any passing
  /// vertex, test the centroid of the last nonempty contraction as well.
  bool probe_center_on_exhaustion = true;
  int threads = 1;

  int samples_for(double duration) const;
  double contraction_for(double epsilon) const;
};

/// Under- and over-approximation of the synchronised reachable set at the
/// end of a piece.
struct SReachApprox {
  Polytope under;
  Polytope over;
};

enum class Outcome { kCaptured, kNotCaptured, kUnknown };

const char* to_string(Outcome o);

struct MembershipVerdict {
  Outcome outcome = Outcome::kUnknown;
  std::optional<Path> witness_path;
  std::optional<SReachApprox> final_sets;
};

/// Maximum over t in [0, T] of |f(t) - sigma(t)|_inf where f flows x0 under
/// `traj` and sigma flows y0 under `loc`.
double max_sync_deviation(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                          const Vector& y0, double T, int scan_points = 512);

/// True iff the location execution from y0 stays within epsilon of the
/// trajectory execution from x0 on [0, T].
bool sync_check_point(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                      const Vector& y0, double epsilon, double T, int scan_points = 512);
bool sync_check_point(const Matrix& a, const Matrix& b, const Vector& x0, const Vector& y0,
                      double epsilon, double T, int scan_points = 512);

/// Sets P_0..P_j of the sampled over-approximation together with the tube
/// boxes B_0..B_j at the same times. `empty` is set when the last set is
/// empty (j < m).
struct OverTrace {
  std::vector<Polytope> sets;
  std::vector<Box> boxes;
  double step = 0.0;
  bool empty = false;

  const Polytope& last() const { return sets.back(); }
};

/// Sampled over-approximation; P0 is used as given. When `invariant` is
/// given, every P_j is additionally intersected with it.
OverTrace overapprox_trace(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                           const Polytope& p0, double epsilon, double T, int m,
                           const Polytope* invariant = nullptr);
Polytope overapprox_piece(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                          const Polytope& p0, double epsilon, double T, int m);
Polytope overapprox_piece(const Matrix& a, const Matrix& b, const Vector& x0, const Polytope& p0,
                          double epsilon, double T, int m);

/// Contraction refinement: hull of all vertices, over all contraction
/// rounds, that pass the point check.
Polytope refine_polytope(const Polytope& p, const AffineDynamics& loc, const AffineDynamics& traj,
                         const Vector& x0, double epsilon, double T, double contraction_delta,
                         const MembershipOptions& options = {});

/// Single piece: over-approximation from P0, then backward refinement from
/// the end state of the trajectory.
SReachApprox sreach_piece(const Polytope& p0, const AffineDynamics& loc, const AffineDynamics& traj,
                          const Vector& x0, double epsilon, double T, int m,
                          double contraction_delta, const MembershipOptions& options = {});

/// Data of piece i of a trajectory.
struct PieceData {
  AffineDynamics dynamics;
  Vector start;
  double start_time = 0.0;
  double duration = 0.0;
};

PieceData piece_data(const PwaTrajectory& f, std::size_t i);

/// Template-simplified under-approximation at the end of a piece, computed
/// from an under-approximation at its start (empty when none is found).
Polytope extend_under(const Polytope& start, const AffineDynamics& flow, const PieceData& piece,
                      double epsilon, const MembershipOptions& options,
                      const Polytope* invariant = nullptr);

/// One link of a membership chain.
struct ChainStep {
  SReachApprox sets;  // template-simplified, at the end of the piece
  OverTrace trace;    // over-approximation samples of the piece
  bool over_empty = false;
};

/// Extends a chain by one piece following a location with flow `flow`.
/// Guard and invariant (when given) are intersected with the start sets and,
/// for the invariant, with every sample of the over-approximation.
ChainStep extend_chain(const SReachApprox& prev, const AffineDynamics& flow, const PieceData& piece,
                       double epsilon, const MembershipOptions& options,
                       const Polytope* invariant = nullptr, const Polytope* guard = nullptr);

/// Initial chain state: the tube box at time zero, intersected with p.
SReachApprox chain_start(const PwaTrajectory& f, double epsilon,
                         const std::optional<Polytope>& p = std::nullopt);

struct PathResult {
  std::vector<SReachApprox> sets;
  MembershipVerdict verdict;
};

/// Chained membership along a fixed path. Throws PathLengthMismatch.
PathResult sreach_path(const Adha& h, const Path& path, const PwaTrajectory& f, double epsilon,
                       const MembershipOptions& options = {},
                       const std::optional<Polytope>& p = std::nullopt);

/// Membership over all paths of h (depth-first, pruned by empty
/// over-approximations). Captured carries the first witness path found.
MembershipVerdict member(const Adha& h, const PwaTrajectory& f, double epsilon,
                         const MembershipOptions& options = {});

}  // namespace adha
