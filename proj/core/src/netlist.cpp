#include "kernelizer/netlist.hpp"

namespace kernelizer {

std::string_view to_string(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::kMultiplier: return "multiplier";
    case ComponentKind::kAdder: return "adder";
    case ComponentKind::kDelay: return "delay";
  }
  return "unknown";
}

ComponentKind component_kind_from(std::string_view name) {
  if (name == "multiplier") return ComponentKind::kMultiplier;
  if (name == "adder") return ComponentKind::kAdder;
  if (name == "delay") return ComponentKind::kDelay;
  fail(ErrorCode::kParse, "unknown component kind '" + std::string(name) + "'");
}

}  // namespace kernelizer
