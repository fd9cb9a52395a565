#include "adha/segmentation.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "adha/parallel.hpp"

namespace adha {
namespace {

constexpr int kBatch = 8;

// Parameter layout: A (row major), b, then x0 when it is free.
struct Problem {
  const TimeSeries* window = nullptr;
  std::optional<Vector> fixed_x0;
  int n = 0;

  int size() const { return n * n + n + (fixed_x0 ? 0 : n); }

  void unpack(const double* theta, AffineDynamics& d, Vector& x0) const {
    d.matrix.resize(n, n);
    d.offset.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) d.matrix(i, j) = theta[i * n + j];
    }
    for (int i = 0; i < n; ++i) d.offset(i) = theta[n * n + i];
    if (fixed_x0) {
      x0 = *fixed_x0;
    } else {
      x0.resize(n);
      for (int i = 0; i < n; ++i) x0(i) = theta[n * n + n + i];
    }
  }

  Vector pack(const AffineDynamics& d, const Vector& x0) const {
    Vector theta(size());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) theta(i * n + j) = d.matrix(i, j);
    }
    theta.segment(n * n, n) = d.offset;
    if (!fixed_x0) theta.tail(n) = x0;
    return theta;
  }

  // Max-norm residual, stepping the homogenised flow between samples.
  double residual(const AffineDynamics& d, const Vector& x0) const {
    const auto& ts = window->times;
    const auto& xs = window->states;
    double worst = (xs[0] - x0).cwiseAbs().maxCoeff();
    Vector x = x0;
    double last_gap = -1.0;
    AffineMap step;
    for (std::size_t j = 1; j < ts.size(); ++j) {
      const double gap = ts[j] - ts[j - 1];
      if (std::abs(gap - last_gap) > 1e-12 * gap) {
        step = flow_map(d, gap);
        last_gap = gap;
      }
      x = step.apply(x);
      const double dev = (xs[j] - x).cwiseAbs().maxCoeff();
      if (!std::isfinite(dev)) return std::numeric_limits<double>::infinity();
      worst = std::max(worst, dev);
    }
    return worst;
  }

  double residual(const double* theta) const {
    AffineDynamics d;
    Vector x0;
    unpack(theta, d, x0);
    if (!d.matrix.allFinite() || !d.offset.allFinite() || !x0.allFinite()) {
      return std::numeric_limits<double>::infinity();
    }
    return residual(d, x0);
  }
};

double gsl_objective(const gsl_vector* v, void* params) {
  const auto* p = static_cast<const Problem*>(params);
  const double r = p->residual(v->data);
  return std::isfinite(r) ? r : 1e300;
}

// Finite-difference least-squares estimate of (A, b).
AffineDynamics least_squares_seed(const TimeSeries& w) {
  const int n = w.dimension();
  const auto k = static_cast<Eigen::Index>(w.size() - 1);
  Matrix reg(k, n + 1);
  Matrix rhs(k, n);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double h = w.times[j + 1] - w.times[j];
    reg.row(j).head(n) = (0.5 * (w.states[j] + w.states[j + 1])).transpose();
    reg(j, n) = 1.0;
    rhs.row(j) = ((w.states[j + 1] - w.states[j]) / h).transpose();
  }
  const Matrix sol = reg.completeOrthogonalDecomposition().solve(rhs);  // (n+1) x n
  AffineDynamics d;
  d.matrix = sol.topRows(n).transpose();
  d.offset = sol.row(n).transpose();
  if (!d.matrix.allFinite() || !d.offset.allFinite()) {
    d.matrix = Matrix::Zero(n, n);
    d.offset = Vector::Zero(n);
  }
  return d;
}

struct Candidate {
  Vector theta;
  double residual = std::numeric_limits<double>::infinity();
};

Candidate nelder_mead(const Problem& problem, const Vector& start, int iterations) {
  const int p = problem.size();
  Candidate best{start, problem.residual(start.data())};
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> x(gsl_vector_alloc(p), gsl_vector_free);
  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> step(gsl_vector_alloc(p), gsl_vector_free);
  for (int i = 0; i < p; ++i) {
    gsl_vector_set(x.get(), i, start(i));
    gsl_vector_set(step.get(), i, 0.05 * std::max(0.1, std::abs(start(i))));
  }
  gsl_multimin_function fn{&gsl_objective, static_cast<std::size_t>(p),
                           const_cast<Problem*>(&problem)};
  std::unique_ptr<gsl_multimin_fminimizer, decltype(&gsl_multimin_fminimizer_free)> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, p),
      gsl_multimin_fminimizer_free);
  gsl_multimin_fminimizer_set(solver.get(), &fn, x.get(), step.get());
  for (int it = 0; it < iterations; ++it) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    if (gsl_multimin_fminimizer_size(solver.get()) < 1e-13) break;
  }
  const double value = solver->fval;
  if (value < best.residual) {
    best.residual = value;
    best.theta = Eigen::Map<const Vector>(solver->x->data, p);
  }
  return best;
}

}  // namespace

std::optional<FitResult> fit_affine(const TimeSeries& window, const std::optional<Vector>& x0,
                                    double delta, const FitOptions& options) {
  if (window.size() < 2) throw TooFewSamples("fit_affine: need at least two samples");
  window.validate();
  if (!(delta >= 0.0)) throw DataError("fit_affine: delta must be non-negative");
  const int n = window.dimension();
  if (x0 && x0->size() != n) throw DimensionMismatch("fit_affine: initial state dimension");

  // Work in window-local time.
  TimeSeries local = window;
  for (auto& t : local.times) t -= window.times[0];
  Problem problem{&local, x0, n};

  const Vector start_state = x0 ? *x0 : local.states[0];
  const Vector ls = problem.pack(least_squares_seed(local), start_state);
  AffineDynamics linear{Matrix::Zero(n, n),
                        (local.states.back() - start_state) / local.times.back()};
  const Vector interp = problem.pack(linear, start_state);
  const double target = delta * (1.0 - 1e-9);

  auto finish = [&](const Candidate& c) {
    FitResult r;
    problem.unpack(c.theta.data(), r.dynamics, r.initial_state);
    r.residual = c.residual;
    return r;
  };

  // Seeds that are already good enough need no search.
  for (const Vector* seed : {&ls, &interp}) {
    const double r = problem.residual(seed->data());
    if (r <= target) return finish({*seed, r});
  }

  const int restarts = std::max(1, options.restarts);
  Candidate best;
  for (int batch = 0; batch < restarts; batch += kBatch) {
    const int count = std::min(kBatch, restarts - batch);
    std::vector<Candidate> results(count);
    parallel_for(static_cast<std::size_t>(count), options.threads, [&](std::size_t k) {
      const int r = batch + static_cast<int>(k);
      Vector start;
      if (r == 0) {
        start = ls;
      } else if (r == 1) {
        start = interp;
      } else {
        std::seed_seq seq{static_cast<std::uint64_t>(options.seed), static_cast<std::uint64_t>(r),
                          static_cast<std::uint64_t>(window.size())};
        std::mt19937_64 rng(seq);
        std::normal_distribution<double> noise(0.0, 1.0);
        const Vector& base = (r % 2 == 0) ? ls : interp;
        const double spread = 0.05 * (1.0 + r / 20.0);
        start = base;
        for (Eigen::Index i = 0; i < start.size(); ++i) {
          start(i) += spread * std::max(1.0, std::abs(base(i))) * noise(rng);
        }
      }
      Candidate c = nelder_mead(problem, start, options.iterations);
      // Restart from the optimum while it keeps improving.
      for (int polish = 0; polish < 4 && c.residual > target; ++polish) {
        const Candidate again = nelder_mead(problem, c.theta, options.iterations);
        if (!(again.residual < c.residual * (1.0 - 1e-6))) {
          c = again.residual < c.residual ? again : c;
          break;
        }
        c = again;
      }
      results[k] = std::move(c);
    });
    for (const auto& c : results) {
      if (c.residual <= target) return finish(c);
      if (c.residual < best.residual) best = c;
    }
  }
  spdlog::debug("fit_affine: best residual {} exceeds delta {} over {} samples", best.residual,
                delta, window.size());
  return std::nullopt;
}

std::pair<std::size_t, FitResult> max_prefix(const TimeSeries& s, std::size_t start,
                                             const std::optional<Vector>& x0, double delta,
                                             const FitOptions& options) {
  if (start + 1 >= s.size()) throw TooFewSamples("max_prefix: need at least two samples");
  const std::size_t last = s.size() - 1;
  if (auto fit = fit_affine(s.window(start, last), x0, delta, options)) return {last, *fit};
  auto lo_fit = fit_affine(s.window(start, start + 1), x0, delta, options);
  if (!lo_fit) {
    throw NoFeasiblePiece("no affine piece fits samples " + std::to_string(start) + ".." +
                          std::to_string(start + 1));
  }
  std::size_t lo = start + 1, hi = last;
  FitResult best = *lo_fit;
  while (hi - lo > 1) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (auto fit = fit_affine(s.window(start, mid), x0, delta, options)) {
      lo = mid;
      best = *fit;
    } else {
      hi = mid;
    }
  }
  return {lo, best};
}

PwaTrajectory segment(const TimeSeries& s, double delta, const FitOptions& options) {
  if (s.size() < 2) throw TooFewSamples("segment: need at least two samples");
  s.validate();
  TimeSeries shifted = s;
  for (auto& t : shifted.times) t -= s.times[0];

  std::vector<double> switch_times{0.0};
  std::vector<AffineDynamics> pieces;
  Vector x0;
  std::optional<Vector> carry;
  std::size_t start = 0;
  while (start + 1 < shifted.size()) {
    auto [end, fit] = max_prefix(shifted, start, carry, delta, options);
    if (pieces.empty()) x0 = fit.initial_state;
    const double span = shifted.times[end] - shifted.times[start];
    carry = flow(fit.dynamics, fit.initial_state, span);
    pieces.push_back(std::move(fit.dynamics));
    switch_times.push_back(shifted.times[end]);
    spdlog::debug("segment: piece {} covers samples {}..{}", pieces.size(), start, end);
    start = end;
  }
  PwaTrajectory f(std::move(switch_times), std::move(pieces), std::move(x0));
  const double dev = max_deviation(f, shifted);
  if (dev > delta) {
    throw InternalError("segment: result deviates by " + std::to_string(dev) + " > delta " +
                        std::to_string(delta));
  }
  return f;
}

}  // namespace adha
