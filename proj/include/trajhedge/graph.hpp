#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "trajhedge/escape.hpp"
#include "trajhedge/node.hpp"
#include "trajhedge/pruning.hpp"

namespace trajhedge {

using NodeId = std::uint32_t;

struct DubinOptions {
  bool enabled = false;
  double alpha = 0.5;
  double beta = 1.5;
  double threshold = 0.1;
};

struct BuildOptions {
  int n_max = 3;
  double hull_shrink = 0.0;  ///< epsilon in [0, 1)
  bool pruning = true;
  bool merge = true;         ///< false builds a tree (one node per path prefix)
  DubinOptions dubin;

  void validate() const;
};

/// Directed acyclic graph of trajectory prefixes. Node 0 is the root; edges
/// go from index i to i+1.
class TrajectoryGraph {
 public:
  TrajectoryGraph() = default;
  TrajectoryGraph(DiscretizationParams disc, GraphNode root);

  [[nodiscard]] NodeId root() const { return 0; }
  [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edge_count_; }
  [[nodiscard]] const GraphNode& node(NodeId id) const { return nodes_.at(id); }
  [[nodiscard]] GraphNode& node(NodeId id) { return nodes_.at(id); }
  [[nodiscard]] const std::vector<GraphNode>& nodes() const { return nodes_; }
  [[nodiscard]] std::span<const NodeId> children(NodeId id) const { return children_.at(id); }
  [[nodiscard]] std::span<const NodeId> parents(NodeId id) const { return parents_.at(id); }
  [[nodiscard]] const DiscretizationParams& disc() const { return disc_; }
  /// True if every non-root node has exactly one parent.
  [[nodiscard]] bool is_tree() const;
  /// Root with no children.
  [[nodiscard]] bool degenerate() const { return children_.front().empty(); }

  /// Real price of a coordinate (1 or 2) at a node.
  [[nodiscard]] double price(NodeId id, int asset) const;

  /// Root-to-node path; requires a unique parent chain.
  [[nodiscard]] std::vector<NodeId> path_to(NodeId id) const;

  NodeId add_node(const GraphNode& n);
  /// Adds an edge unless it already exists.
  void add_edge(NodeId parent, NodeId child);

  BuildOptions options;

 private:
  DiscretizationParams disc_;
  std::vector<GraphNode> nodes_;
  std::vector<std::vector<NodeId>> children_;
  std::vector<std::vector<NodeId>> parents_;
  std::size_t edge_count_ = 0;
};

/// Position of the origin relative to the convex hull of `displacements`.
[[nodiscard]] NodeClass classify(std::span<const GridPoint> displacements);
[[nodiscard]] NodeClass classify(const GraphNode& node, std::span<const GraphNode> children);

/// Increment after hull shrinking: each grid move scaled by (1 - eps) and
/// re-snapped to the grid.
[[nodiscard]] GridPoint shrink_move(std::int64_t m1, std::int64_t m2, double eps);

/// Candidates (node + increment), filtered by `tables` when non-null,
/// duplicates removed. Order follows the increment order of `ne`.
[[nodiscard]] std::vector<GraphNode> generate_children(const GraphNode& node,
                                                       const GraphNode& root,
                                                       const EmpiricalSet& ne,
                                                       const PruningTables* tables, int n_max,
                                                       double hull_shrink);

/// Breadth-first construction. Children of TypeI/TypeII nodes are kept as
/// terminal leaves; in merge mode such leaves are distinct from expandable
/// nodes with the same state.
[[nodiscard]] TrajectoryGraph build_graph(const GraphNode& root, const EmpiricalSet& ne,
                                          const PruningTables& tables,
                                          const BuildOptions& options);

/// Root at the most recent sample of a discounted chart.
[[nodiscard]] GraphNode root_from_chart(const DiscountedChart& chart,
                                        const DiscretizationParams& disc);

/// Uniform child choice until a node without children.
[[nodiscard]] std::vector<NodeId> sample_trajectory(const TrajectoryGraph& graph,
                                                    std::mt19937_64& rng);

void write_nodes_csv(std::ostream& out, const TrajectoryGraph& graph);
void write_edges_csv(std::ostream& out, const TrajectoryGraph& graph);
void write_adjacency_json(std::ostream& out, const TrajectoryGraph& graph);
[[nodiscard]] TrajectoryGraph read_graph(std::istream& nodes_csv, std::istream& edges_csv,
                                         const DiscretizationParams& disc);

}  // namespace trajhedge
