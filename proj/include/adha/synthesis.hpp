#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "adha/membership.hpp"

namespace adha {

/// Edit cost (new locations, new transitions, modified constraints), ordered
/// lexicographically.
struct ModTuple {
  int n_l = 0;
  int n_t = 0;
  int n_c = 0;

  auto operator<=>(const ModTuple&) const = default;
  ModTuple operator+(const UpdateCounts& c) const {
    return {n_l + c.new_locations, n_t + c.new_transitions, n_c + c.modified_constraints};
  }
};

enum class NodeStatus { kUnexplored = 0, kActivated = 1, kExplored = 2, kDeactivated = 3 };

/// Node of the exploration tree. `sets` is the membership chain at the end
/// of the node's layer; `trace` holds the over-approximation samples of the
/// node's own piece (empty for the root).
struct ExplorationNode {
  Path path;
  Adha automaton;
  ModTuple mod;
  NodeStatus status = NodeStatus::kUnexplored;
  int layer = 0;
  std::uint64_t insertion_seq = 0;
  int parent = -1;
  SReachApprox sets;
  bool over_empty = false;
};

struct SynthesisOptions {
  MembershipOptions membership;
  int threads = 1;
};

/// Exploration tree for one trajectory.
class ExplorationTree {
 public:
  ExplorationTree(const Adha& h, const PwaTrajectory& f, double epsilon,
                  const SynthesisOptions& options);

  const std::vector<ExplorationNode>& nodes() const { return nodes_; }
  const ExplorationNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }

  /// Children of an explored node (one per existing location, then a fresh
  /// one), created with status unexplored. Returns their indices.
  std::vector<int> expand(int index);

  /// Computes the under-approximation chain of an activated node and sets
  /// its status to explored or deactivated; explored nodes below the bottom
  /// layer get their children created and activated.
  void tree_update(int index);

  /// Activated node with minimal (mod, insertion_seq). Throws NoActivatedNode.
  int decide() const;

  /// Runs decide / tree_update until a bottom-layer node is explored.
  int run();

  std::size_t explored_count() const { return explored_; }
  std::size_t piece_count() const { return f_.num_pieces(); }

 private:
  void activate(int index);

  const PwaTrajectory& f_;
  double epsilon_;
  SynthesisOptions options_;
  std::vector<ExplorationNode> nodes_;
  std::vector<int> activated_;
  std::uint64_t next_seq_ = 0;
  std::size_t explored_ = 0;
};

struct UpdateResult {
  Adha automaton;
  Path witness;
  ModTuple mod;
  std::size_t explored = 0;
  std::size_t created = 0;
};

/// One model update: the automaton at the first explored bottom-layer node.
UpdateResult model_update(const Adha& h, const PwaTrajectory& f, double epsilon,
                          const SynthesisOptions& options = {});

struct TrajectoryStats {
  std::size_t index = 0;
  std::size_t explored = 0;
  double seconds = 0.0;
  std::size_t locations = 0;
  std::size_t transitions = 0;
};

struct SynthesisResult {
  Adha automaton;
  std::vector<Path> witnesses;
  std::vector<TrajectoryStats> stats;

  std::size_t total_explored() const;
};

/// Folds model_update over the trajectories, starting from `start` (empty
/// automaton by default). The callback, if any, sees the model after every
/// trajectory.
SynthesisResult synthesize(const std::vector<PwaTrajectory>& trajectories, double epsilon,
                           const SynthesisOptions& options = {},
                           const std::optional<Adha>& start = std::nullopt,
                           const std::function<void(const SynthesisResult&)>& progress = {});

}  // namespace adha
