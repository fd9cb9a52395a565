#include "adha/synthesis.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>

#include "adha/parallel.hpp"

namespace adha {
namespace {

void add_box_corners(const Box& b, std::vector<Vector>& out) {
  const auto n = static_cast<int>(b.center.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vector v = b.center;
    for (int i = 0; i < n; ++i) v(i) += ((mask >> i) & 1) ? b.radius : -b.radius;
    out.push_back(std::move(v));
  }
}

// Region swept by the candidate executions of a piece: the tube boxes at
// the sample times that were reached. When the over-approximation became
// empty, the free flow of the last nonempty sample up to the end of the
// piece is added.
Polytope swept_region(const OverTrace& trace, const AffineDynamics& flow_q, int m) {
  std::vector<Vector> pts;
  for (const auto& b : trace.boxes) add_box_corners(b, pts);
  if (trace.empty && trace.sets.size() >= 2) {
    const AffineMap map = flow_map(flow_q, trace.step);
    Polytope p = trace.sets[trace.sets.size() - 2];
    for (auto j = static_cast<int>(trace.sets.size()) - 1; j <= m; ++j) {
      p = map_polytope(p, map);
      const auto& vs = vertices(p);
      pts.insert(pts.end(), vs.begin(), vs.end());
    }
  }
  return chull(pts);
}

}  // namespace

ExplorationTree::ExplorationTree(const Adha& h, const PwaTrajectory& f, double epsilon,
                                 const SynthesisOptions& options)
    : f_(f), epsilon_(epsilon), options_(options) {
  if (!(epsilon >= 0.0)) throw DataError("epsilon must be non-negative");
  if (h.dimension() != 0 && h.dimension() != f.dimension()) {
    throw DimensionMismatch("trajectory and automaton dimensions differ");
  }
  ExplorationNode root;
  root.automaton = h;
  root.status = NodeStatus::kExplored;
  root.insertion_seq = next_seq_++;
  root.sets = chain_start(f, epsilon);
  nodes_.push_back(std::move(root));
  if (f.num_pieces() > 0) {
    for (int c : expand(0)) activate(c);
  }
}

std::vector<int> ExplorationTree::expand(int index) {
  const ExplorationNode parent = nodes_[static_cast<std::size_t>(index)];
  const auto piece_index = static_cast<std::size_t>(parent.layer);
  const PieceData piece = piece_data(f_, piece_index);
  const int m = options_.membership.samples_for(piece.duration);
  const auto& locs = parent.automaton.locations();

  // Candidate targets: existing locations in order, then a fresh one.
  std::vector<std::optional<std::string>> targets;
  for (const auto& l : locs) targets.emplace_back(l.name);
  const Location* dup = parent.automaton.find_flow(piece.dynamics);
  if (dup == nullptr) {
    targets.emplace_back(std::nullopt);
  } else {
    spdlog::debug("layer {}: no fresh location, flow equals that of '{}'", parent.layer, dup->name);
  }

  std::vector<std::optional<ExplorationNode>> built(targets.size());
  parallel_for(targets.size(), options_.threads, [&](std::size_t k) {
    const AffineDynamics& flow_q =
        targets[k] ? parent.automaton.location(*targets[k]).flow : piece.dynamics;
    const OverTrace trace = overapprox_trace(flow_q, piece.dynamics, piece.start, parent.sets.over,
                                             epsilon_, piece.duration, m);
    const Polytope r_inv = swept_region(trace, flow_q, m);
    const Polytope r_guard = Polytope::from_box(trace.boxes.front());
    QUpdate upd = q_update(parent.automaton, parent.path, targets[k], r_inv, r_guard, piece.dynamics);
    ExplorationNode child;
    child.path = parent.path;
    child.path.push_back(upd.location);
    child.automaton = std::move(upd.automaton);
    child.mod = parent.mod + upd.counts;
    child.layer = parent.layer + 1;
    child.parent = index;
    child.over_empty = trace.empty;
    const int n = f_.dimension();
    child.sets.over = trace.empty ? Polytope::empty(n)
                                  : template_overapprox(trace.last(), octagonal_directions(n));
    child.sets.under = Polytope::empty(n);
    built[k] = std::move(child);
  });

  std::vector<int> out;
  for (auto& c : built) {
    c->insertion_seq = next_seq_++;
    nodes_.push_back(std::move(*c));
    out.push_back(static_cast<int>(nodes_.size()) - 1);
  }
  return out;
}

void ExplorationTree::activate(int index) {
  nodes_[static_cast<std::size_t>(index)].status = NodeStatus::kActivated;
  activated_.push_back(index);
}

void ExplorationTree::tree_update(int index) {
  auto& node = nodes_[static_cast<std::size_t>(index)];
  if (node.status != NodeStatus::kActivated) {
    throw InternalError("tree_update on a node that is not activated");
  }
  ++explored_;
  activated_.erase(std::find(activated_.begin(), activated_.end(), index));
  bool captured = false;
  if (!node.over_empty) {
    const ExplorationNode& parent = nodes_[static_cast<std::size_t>(node.parent)];
    const PieceData piece = piece_data(f_, static_cast<std::size_t>(parent.layer));
    const AffineDynamics& flow_q = node.automaton.location(node.path.back()).flow;
    node.sets.under = extend_under(parent.sets.under, flow_q, piece, epsilon_, options_.membership);
    captured = !is_empty(node.sets.under);
  }
  node.status = captured ? NodeStatus::kExplored : NodeStatus::kDeactivated;
  if (captured && static_cast<std::size_t>(node.layer) < f_.num_pieces()) {
    for (int c : expand(index)) activate(c);
  }
}

int ExplorationTree::decide() const {
  if (activated_.empty()) throw NoActivatedNode("exploration tree has no activated node");
  int best = activated_.front();
  for (int i : activated_) {
    const auto& a = nodes_[static_cast<std::size_t>(i)];
    const auto& b = nodes_[static_cast<std::size_t>(best)];
    if (a.mod < b.mod || (a.mod == b.mod && a.insertion_seq < b.insertion_seq)) best = i;
  }
  return best;
}

int ExplorationTree::run() {
  if (f_.num_pieces() == 0) return 0;
  while (true) {
    const int next = decide();
    tree_update(next);
    const auto& node = nodes_[static_cast<std::size_t>(next)];
    if (node.status == NodeStatus::kExplored &&
        static_cast<std::size_t>(node.layer) == f_.num_pieces()) {
      return next;
    }
  }
}

UpdateResult model_update(const Adha& h, const PwaTrajectory& f, double epsilon,
                          const SynthesisOptions& options) {
  ExplorationTree tree(h, f, epsilon, options);
  const int leaf = tree.run();
  const auto& node = tree.node(leaf);
  return {node.automaton, node.path, node.mod, tree.explored_count(), tree.nodes().size()};
}

std::size_t SynthesisResult::total_explored() const {
  std::size_t total = 0;
  for (const auto& s : stats) total += s.explored;
  return total;
}

SynthesisResult synthesize(const std::vector<PwaTrajectory>& trajectories, double epsilon,
                           const SynthesisOptions& options, const std::optional<Adha>& start,
                           const std::function<void(const SynthesisResult&)>& progress) {
  SynthesisResult result;
  result.automaton = start ? *start : Adha();
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    UpdateResult upd = model_update(result.automaton, trajectories[i], epsilon, options);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    result.automaton = std::move(upd.automaton);
    result.witnesses.push_back(std::move(upd.witness));
    result.stats.push_back({i, upd.explored, secs, result.automaton.locations().size(),
                            result.automaton.transitions().size()});
    spdlog::debug("trajectory {}: {} explored nodes, mod ({},{},{}), |Q|={} |E|={}", i, upd.explored,
                 upd.mod.n_l, upd.mod.n_t, upd.mod.n_c, result.automaton.locations().size(),
                 result.automaton.transitions().size());
    if (progress) progress(result);
  }
  return result;
}

}  // namespace adha
