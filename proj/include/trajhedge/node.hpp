#pragma once

#include <cstdint>
#include <string_view>

namespace trajhedge {

enum class NodeClass { ArbitrageFree, TypeI, TypeII, TerminalOnly };

[[nodiscard]] std::string_view to_string(NodeClass c);
[[nodiscard]] NodeClass node_class_from_string(std::string_view s);

/// Trajectory prefix state (X1, X2, i, T, W) on the integer grid.
struct GraphNode {
  std::int64_t k1 = 0;
  std::int64_t k2 = 0;
  int i = 0;
  std::int64_t t_steps = 0;
  std::int64_t w = 0;
  NodeClass node_class = NodeClass::TerminalOnly;
  bool terminal = true;

  [[nodiscard]] bool same_state(const GraphNode& o) const {
    return k1 == o.k1 && k2 == o.k2 && i == o.i && t_steps == o.t_steps && w == o.w;
  }
};

}  // namespace trajhedge
