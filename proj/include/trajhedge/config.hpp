#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "trajhedge/analysis.hpp"
#include "trajhedge/graph.hpp"
#include "trajhedge/market_data.hpp"

namespace trajhedge {

/// Capital for a P&L run: a number, or a reference bound plus an offset.
struct CapitalSpec {
  enum class Base { Absolute, Upper, Lower, Spot };
  Base base = Base::Upper;
  double offset = 0.0;
};

struct PnlConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  double epsilon = 1e-6;
  Direction strategy = Direction::Super;
  CapitalSpec capital;
};

struct MatchConfig {
  std::filesystem::path chart;  ///< held-out chart; empty means the input chart
  int window = -1;              ///< index into that chart's windows, negative counts from the end
  bool through_graph = false;   ///< false matches through the unpruned N_E tree
  int n_max = 0;                ///< 0 matches every escape of the window
};

struct CalibrationConfig {
  SweepRange first{0.005, 0.05, 0.005};
  SweepRange second{0.0005, 0.005, 0.0005};
};

/// Everything a pipeline run needs, parsed from one JSON document.
struct RunConfig {
  std::filesystem::path chart;
  ChartSchema schema;
  int numeraire = 0;
  TimeGrid grid;
  EscapeParams escape;
  DiscretizationParams disc;
  BuildOptions build;
  int target = 2;
  int trade = 1;
  PnlConfig pnl;
  GbmParams gbm;
  CalibrationConfig calibration;
  MatchConfig match;
  unsigned threads = 1;
  std::filesystem::path output_dir = "out";

  /// Canonical JSON with every default filled in.
  nlohmann::json json;

  /// FNV-1a of the canonical JSON dump, 16 hex digits.
  [[nodiscard]] std::string hash() const;
};

/// Parses and validates; errors name the offending key path.
[[nodiscard]] RunConfig parse_config(const nlohmann::json& doc);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

/// Key schema with types and defaults.
[[nodiscard]] nlohmann::json config_schema();

}  // namespace trajhedge
