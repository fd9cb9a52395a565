#include "adha/automaton.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace adha {
namespace {

bool contains_abs(const Polytope& p, const Vector& x, double tol) {
  if (p.known_empty()) return false;
  return std::all_of(p.constraints().begin(), p.constraints().end(),
                     [&](const LinearConstraint& c) { return c.violation(x) <= tol; });
}

// Convex hull of the union of two polytopes; either may be empty.
Polytope hull_union(const Polytope& a, const Polytope& b) {
  std::vector<Vector> pts;
  if (!is_empty(a)) pts = vertices(a);
  if (!is_empty(b)) {
    const auto& vb = vertices(b);
    pts.insert(pts.end(), vb.begin(), vb.end());
  }
  if (pts.empty()) return Polytope::empty(a.dimension());
  return chull(pts);
}

}  // namespace

const Location& Adha::location(const std::string& name) const {
  const Location* loc = find_location(name);
  if (loc == nullptr) throw UnknownLocation("unknown location '" + name + "'");
  return *loc;
}

const Location* Adha::find_location(const std::string& name) const {
  for (const auto& l : locations_) {
    if (l.name == name) return &l;
  }
  return nullptr;
}

const Transition* Adha::find_transition(const std::string& from, const std::string& to) const {
  for (const auto& t : transitions_) {
    if (t.from == from && t.to == to) return &t;
  }
  return nullptr;
}

void Adha::add_location(Location loc) {
  if (dimension_ == 0) dimension_ = loc.flow.dimension();
  if (loc.flow.dimension() != dimension_ || loc.invariant.dimension() != dimension_) {
    throw DimensionMismatch("location '" + loc.name + "' has the wrong dimension");
  }
  locations_.push_back(std::move(loc));
}

void Adha::set_transition(Transition t) {
  if (t.guard.dimension() != dimension_) throw DimensionMismatch("guard dimension");
  for (auto& e : transitions_) {
    if (e.from == t.from && e.to == t.to) {
      e.guard = std::move(t.guard);
      return;
    }
  }
  transitions_.push_back(std::move(t));
}

void Adha::set_invariant(const std::string& name, Polytope invariant) {
  for (auto& l : locations_) {
    if (l.name == name) {
      l.invariant = std::move(invariant);
      return;
    }
  }
  throw UnknownLocation("unknown location '" + name + "'");
}

std::string Adha::fresh_name() const {
  for (std::size_t k = locations_.size() + 1;; ++k) {
    std::string name = "q" + std::to_string(k);
    if (find_location(name) == nullptr) return name;
  }
}

const Location* Adha::find_flow(const AffineDynamics& d, double tol) const {
  for (const auto& l : locations_) {
    if (l.flow.distance(d) <= tol) return &l;
  }
  return nullptr;
}

std::vector<std::string> validate(const Adha& h) {
  std::vector<std::string> issues;
  std::set<std::string> names;
  for (const auto& l : h.locations()) {
    if (!names.insert(l.name).second) issues.push_back("duplicate location name '" + l.name + "'");
    try {
      l.flow.validate();
    } catch (const Error& e) {
      issues.push_back("location '" + l.name + "': " + e.what());
    }
    try {
      vertices(l.invariant);
    } catch (const UnboundedPolytope&) {
      issues.push_back("location '" + l.name + "': unbounded invariant");
    } catch (const EmptyPolytope&) {
      issues.push_back("location '" + l.name + "': empty invariant");
    }
  }
  const auto& locs = h.locations();
  for (std::size_t i = 0; i < locs.size(); ++i) {
    for (std::size_t j = i + 1; j < locs.size(); ++j) {
      if (locs[i].flow.distance(locs[j].flow) <= 1e-9) {
        issues.push_back("locations '" + locs[i].name + "' and '" + locs[j].name +
                         "' share the same flow");
      }
    }
  }
  for (const auto& t : h.transitions()) {
    if (h.find_location(t.from) == nullptr || h.find_location(t.to) == nullptr) {
      issues.push_back("transition " + t.from + " -> " + t.to + " references an unknown location");
    }
  }
  return issues;
}

bool is_path(const Adha& h, const Path& path) {
  for (const auto& q : path) {
    if (h.find_location(q) == nullptr) return false;
  }
  for (std::size_t i = 1; i < path.size(); ++i) {
    if (h.find_transition(path[i - 1], path[i]) == nullptr) return false;
  }
  return true;
}

bool check_execution(const Adha& h, const Execution& e, double tol, double grid) {
  const auto& f = e.trajectory;
  if (e.path.size() != f.num_pieces()) {
    throw PathLengthMismatch("execution: path has " + std::to_string(e.path.size()) +
                             " locations for " + std::to_string(f.num_pieces()) + " pieces");
  }
  for (std::size_t i = 0; i < e.path.size(); ++i) {
    const Location* loc = h.find_location(e.path[i]);
    if (loc == nullptr) return false;
    if (loc->flow.distance(f.pieces()[i]) > 1e-12) return false;
    const double len = f.piece_duration(i);
    const auto steps = static_cast<std::size_t>(std::ceil(len / grid));
    const AffineMap step = flow_map(f.pieces()[i], len / static_cast<double>(steps));
    Vector x = f.state_at_switch(i);
    for (std::size_t k = 0; k <= steps; ++k) {
      const Vector& probe = k == steps ? f.state_at_switch(i + 1) : x;
      if (!contains_abs(loc->invariant, probe, tol)) return false;
      x = step.apply(x);
    }
    if (i + 1 < e.path.size()) {
      const Transition* t = h.find_transition(e.path[i], e.path[i + 1]);
      if (t == nullptr || !contains_abs(t->guard, f.state_at_switch(i + 1), tol)) return false;
    }
  }
  return true;
}

QUpdate q_update(const Adha& h, const Path& path, const std::optional<std::string>& q,
                 const Polytope& r_inv, const Polytope& r_guard, const AffineDynamics& dynamics) {
  QUpdate out{h, {}, {}};
  Adha& g = out.automaton;
  if (q) {
    const Location& loc = h.location(*q);
    out.location = *q;
    if (!is_subset(r_inv, loc.invariant)) {
      g.set_invariant(*q, hull_union(loc.invariant, r_inv));
      ++out.counts.modified_constraints;
    }
  } else {
    if (const Location* dup = h.find_flow(dynamics)) {
      throw InjectivityViolation("fresh location would duplicate the flow of '" + dup->name + "'");
    }
    out.location = h.fresh_name();
    Location loc{out.location, dynamics, minimized(r_inv)};
    g.add_location(std::move(loc));
    ++out.counts.new_locations;
  }
  if (!path.empty()) {
    const std::string& last = path.back();
    h.location(last);
    const Transition* t = h.find_transition(last, out.location);
    if (t == nullptr) {
      g.set_transition({last, out.location, r_guard});
      ++out.counts.new_transitions;
    } else if (!is_subset(r_guard, t->guard)) {
      g.set_transition({last, out.location, hull_union(t->guard, r_guard)});
      ++out.counts.modified_constraints;
    }
  }
  return out;
}

}  // namespace adha
