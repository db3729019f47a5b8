#pragma once

#include <random>
#include <vector>

#include "trajhedge/escape.hpp"
#include "trajhedge/graph.hpp"
#include "trajhedge/market_data.hpp"
#include "trajhedge/pruning.hpp"
#include "trajhedge/superhedge.hpp"

namespace fixture {

struct TreeShape {
  int max_depth = 4;
  int max_fanout = 5;
  int move = 3;            ///< grid moves drawn from [-move, move]
  double stop = 0.15;      ///< chance that a non-root node below max_depth is a leaf
  std::int64_t origin = 20;
};

/// Random tree with integer grid coordinates and unit grid steps.
trajhedge::TrajectoryGraph random_tree(std::mt19937_64& rng, const TreeShape& shape = {});

/// Integer payoff per leaf drawn from [-10, 10].
trajhedge::Payoff random_payoff(const trajhedge::TrajectoryGraph& tree, std::mt19937_64& rng);

/// Eight nodes; node 5 is a type II node and node 1 loses its straddle once
/// node 5 is skipped. With `excise` the subtree through node 1 is removed.
trajhedge::TrajectoryGraph null_set_graph(bool excise);

/// Chart, N_E, tables and built graph from one simulated run.
struct Pipeline {
  trajhedge::UndiscountedChart chart;
  trajhedge::DiscountedChart discounted;
  trajhedge::EmpiricalSet ne;
  trajhedge::PruningTables tables;
  trajhedge::GraphNode root;
  trajhedge::TrajectoryGraph graph;
};

struct PipelineSpec {
  trajhedge::GbmParams gbm;
  trajhedge::TimeGrid grid;
  trajhedge::EscapeParams escape;
  trajhedge::DiscretizationParams disc;
  trajhedge::BuildOptions build;
};

Pipeline run_pipeline(const trajhedge::UndiscountedChart& chart, const PipelineSpec& spec);
Pipeline run_pipeline(const PipelineSpec& spec);

/// Settings of the bundled example: 3-minute grid, 130 steps, model B with
/// 0.011, grid step 0.01, three rebalances.
PipelineSpec bundled_spec();

/// Model A pipeline with the Brownian parameters 0.01 / 0.02.
PipelineSpec brownian_spec(std::uint64_t seed);

/// True if every node with children is arbitrage-free in two dimensions.
bool all_arbitrage_free(const trajhedge::TrajectoryGraph& g);

}  // namespace fixture
