#include "adha/membership.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "adha/parallel.hpp"

namespace adha {
namespace {

// Stacked homogeneous system z = (x, y, 1) with x following the trajectory
// and y the location; h = x - y.
class SyncProfile {
 public:
  SyncProfile(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
              const Vector& y0)
      : n_(static_cast<int>(x0.size())) {
    if (loc.dimension() != n_ || traj.dimension() != n_ || y0.size() != n_) {
      throw DimensionMismatch("sync check: incompatible dimensions");
    }
    m_ = Matrix::Zero(2 * n_ + 1, 2 * n_ + 1);
    m_.block(0, 0, n_, n_) = traj.matrix;
    m_.block(0, 2 * n_, n_, 1) = traj.offset;
    m_.block(n_, n_, n_, n_) = loc.matrix;
    m_.block(n_, 2 * n_, n_, 1) = loc.offset;
    z0_.resize(2 * n_ + 1);
    z0_ << x0, y0, 1.0;
  }

  int dimension() const { return n_; }

  Vector diff(const Vector& z) const { return z.head(n_) - z.segment(n_, n_); }
  Vector at(double t) const { return diff(exp_matrix(m_, t) * z0_); }

  // Maximum of |h|_inf on [0, T]. With early_exit, returns as soon as a
  // value above `threshold` is established.
  double max_abs(double T, int scan_points, double threshold, bool early_exit) const {
    double best = std::max(diff(z0_).cwiseAbs().maxCoeff(), at(T).cwiseAbs().maxCoeff());
    if (early_exit && best > threshold) return best;
    if (T <= 0.0) return best;
    const int pts = std::max(3, scan_points);
    const double dt = T / (pts - 1);
    const Matrix step = exp_matrix(m_, dt);
    Matrix vals(pts, n_);
    Vector z = z0_;
    for (int k = 0; k < pts; ++k) {
      vals.row(k) = diff(z).transpose();
      z = step * z;
    }
    best = std::max(best, vals.cwiseAbs().maxCoeff());
    if (early_exit && best > threshold) return best;

    const double cutoff_base = early_exit ? threshold : best;
    for (int i = 0; i < n_; ++i) {
      const auto col = vals.col(i);
      double curvature = 0.0;
      for (int k = 1; k + 1 < pts; ++k) {
        curvature = std::max(curvature, std::abs(col(k + 1) - 2.0 * col(k) + col(k - 1)));
      }
      const double bound = 0.5 * curvature + 1e-13 * (1.0 + col.cwiseAbs().maxCoeff());
      for (int k = 1; k + 1 < pts; ++k) {
        const double a = std::abs(col(k));
        if (a < std::abs(col(k - 1)) || a < std::abs(col(k + 1))) continue;
        const double cutoff = early_exit ? cutoff_base : best;
        if (a + bound <= cutoff) continue;
        auto neg = [&](double t) { return -std::abs(at(t)(i)); };
        const auto r = boost::math::tools::brent_find_minima(
            neg, (k - 1) * dt, (k + 1) * dt, std::numeric_limits<double>::digits / 2);
        best = std::max({best, a, -r.second});
        if (early_exit && best > threshold) return best;
      }
    }
    return best;
  }

 private:
  int n_;
  Matrix m_;
  Vector z0_;
};

Polytope intersect_if_needed(const Polytope& p, const Polytope& q) {
  if (is_subset(p, q)) return p;
  return intersect(p, q);
}

using VertexKey = std::vector<long long>;

VertexKey key_of(const Vector& v) {
  VertexKey k(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) k[i] = std::llround(v(i) * 1e12);
  return k;
}

}  // namespace

int MembershipOptions::samples_for(double duration) const {
  if (fixed_samples) return std::max(1, *fixed_samples);
  const int m = static_cast<int>(std::ceil(samples_per_unit * duration - 1e-9));
  return std::max(min_samples, m);
}

double MembershipOptions::contraction_for(double epsilon) const {
  return contraction_delta ? *contraction_delta : epsilon / 10.0;
}

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kCaptured:
      return "captured";
    case Outcome::kNotCaptured:
      return "not-captured";
    case Outcome::kUnknown:
      return "unknown";
  }
  return "unknown";
}

double max_sync_deviation(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                          const Vector& y0, double T, int scan_points) {
  return SyncProfile(loc, traj, x0, y0).max_abs(T, scan_points, 0.0, false);
}

bool sync_check_point(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                      const Vector& y0, double epsilon, double T, int scan_points) {
  const SyncProfile profile(loc, traj, x0, y0);
  return profile.max_abs(T, scan_points, epsilon, true) <= epsilon;
}

bool sync_check_point(const Matrix& a, const Matrix& b, const Vector& x0, const Vector& y0,
                      double epsilon, double T, int scan_points) {
  const Vector zero = Vector::Zero(a.rows());
  return sync_check_point(AffineDynamics(a, zero), AffineDynamics(b, zero), x0, y0, epsilon, T,
                          scan_points);
}

OverTrace overapprox_trace(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                           const Polytope& p0, double epsilon, double T, int m,
                           const Polytope* invariant) {
  if (m < 1) throw DataError("over-approximation needs at least one sample");
  OverTrace trace;
  trace.step = T / m;
  trace.sets.push_back(p0);
  trace.boxes.push_back({x0, epsilon});
  if (is_empty(p0)) {
    trace.empty = true;
    return trace;
  }
  const AffineMap map = flow_map(loc, trace.step);
  for (int j = 1; j <= m; ++j) {
    const Box box{flow(traj, x0, j * trace.step), epsilon};
    Polytope p = intersect(map_polytope(trace.sets.back(), map), Polytope::from_box(box));
    if (invariant != nullptr && !is_empty(p)) p = intersect_if_needed(p, *invariant);
    trace.sets.push_back(p);
    trace.boxes.push_back(box);
    if (is_empty(p)) {
      trace.empty = true;
      break;
    }
  }
  return trace;
}

Polytope overapprox_piece(const AffineDynamics& loc, const AffineDynamics& traj, const Vector& x0,
                          const Polytope& p0, double epsilon, double T, int m) {
  return overapprox_trace(loc, traj, x0, p0, epsilon, T, m).last();
}

Polytope overapprox_piece(const Matrix& a, const Matrix& b, const Vector& x0, const Polytope& p0,
                          double epsilon, double T, int m) {
  const Vector zero = Vector::Zero(a.rows());
  return overapprox_piece(AffineDynamics(a, zero), AffineDynamics(b, zero), x0, p0, epsilon, T, m);
}

Polytope refine_polytope(const Polytope& p, const AffineDynamics& loc, const AffineDynamics& traj,
                         const Vector& x0, double epsilon, double T, double contraction_delta,
                         const MembershipOptions& options) {
  if (!(contraction_delta > 0.0)) throw DataError("refinement needs a positive contraction step");
  const int n = p.dimension();
  if (is_empty(p)) return Polytope::empty(n);
  const auto [lo, hi] = bounding_box(p);
  const int max_rounds = static_cast<int>(std::ceil((hi - lo).norm() / contraction_delta)) + 1;

  std::map<VertexKey, bool> verdicts;
  std::vector<Vector> passed;
  auto check = [&](const Vector& v) {
    return sync_check_point(loc, traj, x0, v, epsilon, T, options.scan_points);
  };

  Polytope current = minimized(p);
  std::optional<Polytope> last_nonempty;
  for (int round = 0; round <= max_rounds; ++round) {
    if (is_empty(current)) break;
    last_nonempty = current;
    const auto& vs = vertices(current);
    std::vector<const Vector*> todo;
    for (const auto& v : vs) {
      if (verdicts.find(key_of(v)) == verdicts.end()) todo.push_back(&v);
    }
    std::vector<char> results(todo.size());
    parallel_for(todo.size(), options.threads, [&](std::size_t k) { results[k] = check(*todo[k]); });
    for (std::size_t k = 0; k < todo.size(); ++k) verdicts[key_of(*todo[k])] = results[k] != 0;

    bool any_failed = false;
    for (const auto& v : vs) {
      if (verdicts[key_of(v)]) {
        passed.push_back(v);
      } else {
        any_failed = true;
      }
    }
    if (!any_failed) break;
    current = contract(current, contraction_delta);
  }
  if (passed.empty() && options.probe_center_on_exhaustion && last_nonempty) {
    const Vector c = vertex_centroid(*last_nonempty);
    if (check(c)) passed.push_back(c);
  }
  if (passed.empty()) return Polytope::empty(n);
  return chull(passed);
}

SReachApprox sreach_piece(const Polytope& p0, const AffineDynamics& loc, const AffineDynamics& traj,
                          const Vector& x0, double epsilon, double T, int m,
                          double contraction_delta, const MembershipOptions& options) {
  const int n = p0.dimension();
  const Polytope over = overapprox_piece(loc, traj, x0, p0, epsilon, T, m);
  if (is_empty(over)) return {Polytope::empty(n), Polytope::empty(n)};
  const Vector x1 = flow(traj, x0, T);
  Polytope under = refine_polytope(over, invert(loc), invert(traj), x1, epsilon, T,
                                   contraction_delta, options);
  return {std::move(under), over};
}

PieceData piece_data(const PwaTrajectory& f, std::size_t i) {
  return {f.pieces()[i], f.state_at_switch(i), f.switch_times()[i], f.piece_duration(i)};
}

Polytope extend_under(const Polytope& start, const AffineDynamics& flow_q, const PieceData& piece,
                      double epsilon, const MembershipOptions& options, const Polytope* invariant) {
  const int n = start.dimension();
  if (is_empty(start)) return Polytope::empty(n);
  const OverTrace inner =
      overapprox_trace(flow_q, piece.dynamics, piece.start, start, epsilon, piece.duration,
                       options.samples_for(piece.duration), invariant);
  if (inner.empty) return Polytope::empty(n);
  const Vector x1 = flow(piece.dynamics, piece.start, piece.duration);
  const Polytope under =
      refine_polytope(inner.last(), invert(flow_q), invert(piece.dynamics), x1, epsilon,
                      piece.duration, options.contraction_for(epsilon), options);
  if (is_empty(under)) return Polytope::empty(n);
  return template_underapprox(under, octagonal_directions(n));
}

ChainStep extend_chain(const SReachApprox& prev, const AffineDynamics& flow_q,
                       const PieceData& piece, double epsilon, const MembershipOptions& options,
                       const Polytope* invariant, const Polytope* guard) {
  const int n = prev.over.dimension();
  const int m = options.samples_for(piece.duration);
  auto constrain = [&](Polytope p) {
    if (guard != nullptr && !is_empty(p)) p = intersect_if_needed(p, *guard);
    if (invariant != nullptr && !is_empty(p)) p = intersect_if_needed(p, *invariant);
    return p;
  };

  ChainStep step;
  step.trace = overapprox_trace(flow_q, piece.dynamics, piece.start, constrain(prev.over), epsilon,
                                piece.duration, m, invariant);
  if (step.trace.empty) {
    step.over_empty = true;
    step.sets = {Polytope::empty(n), Polytope::empty(n)};
    return step;
  }
  const auto dirs = octagonal_directions(n);
  step.sets.over = template_overapprox(step.trace.last(), dirs);
  step.sets.under = Polytope::empty(n);
  if (!is_empty(prev.under)) {
    step.sets.under = extend_under(constrain(prev.under), flow_q, piece, epsilon, options, invariant);
  }
  return step;
}

SReachApprox chain_start(const PwaTrajectory& f, double epsilon, const std::optional<Polytope>& p) {
  Polytope box = Polytope::from_box({f.initial_state(), epsilon});
  if (p) box = intersect(box, *p);
  return {box, box};
}

PathResult sreach_path(const Adha& h, const Path& path, const PwaTrajectory& f, double epsilon,
                       const MembershipOptions& options, const std::optional<Polytope>& p) {
  if (path.size() != f.num_pieces()) {
    throw PathLengthMismatch("path has " + std::to_string(path.size()) + " locations for " +
                             std::to_string(f.num_pieces()) + " pieces");
  }
  for (const auto& q : path) h.location(q);
  PathResult result;
  SReachApprox state = chain_start(f, epsilon, p);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const Location& loc = h.location(path[i]);
    const Polytope* guard = nullptr;
    if (i > 0) {
      const Transition* t = h.find_transition(path[i - 1], path[i]);
      if (t == nullptr) {
        result.verdict.outcome = Outcome::kNotCaptured;
        return result;
      }
      guard = &t->guard;
    }
    ChainStep step =
        extend_chain(state, loc.flow, piece_data(f, i), epsilon, options, &loc.invariant, guard);
    result.sets.push_back(step.sets);
    if (step.over_empty) {
      result.verdict.outcome = Outcome::kNotCaptured;
      result.verdict.final_sets = step.sets;
      return result;
    }
    state = std::move(step.sets);
  }
  result.verdict.final_sets = state;
  if (!is_empty(state.under)) {
    result.verdict.outcome = Outcome::kCaptured;
    result.verdict.witness_path = path;
  } else {
    result.verdict.outcome = Outcome::kUnknown;
  }
  return result;
}

namespace {

struct Search {
  const Adha& h;
  const PwaTrajectory& f;
  double epsilon;
  const MembershipOptions& options;
  bool saw_unknown = false;
  Path path;

  std::optional<MembershipVerdict> dfs(const SReachApprox& state) {
    const std::size_t i = path.size();
    if (i == f.num_pieces()) {
      if (is_empty(state.under)) {
        saw_unknown = true;
        return std::nullopt;
      }
      return MembershipVerdict{Outcome::kCaptured, path, state};
    }
    for (const auto& loc : h.locations()) {
      const Polytope* guard = nullptr;
      if (i > 0) {
        const Transition* t = h.find_transition(path.back(), loc.name);
        if (t == nullptr) continue;
        guard = &t->guard;
      }
      ChainStep step =
          extend_chain(state, loc.flow, piece_data(f, i), epsilon, options, &loc.invariant, guard);
      if (step.over_empty) continue;
      path.push_back(loc.name);
      auto found = dfs(step.sets);
      path.pop_back();
      if (found) return found;
    }
    return std::nullopt;
  }
};

}  // namespace

MembershipVerdict member(const Adha& h, const PwaTrajectory& f, double epsilon,
                         const MembershipOptions& options) {
  Search search{h, f, epsilon, options, false, {}};
  if (auto found = search.dfs(chain_start(f, epsilon))) return *found;
  MembershipVerdict v;
  v.outcome = search.saw_unknown ? Outcome::kUnknown : Outcome::kNotCaptured;
  return v;
}

}  // namespace adha
