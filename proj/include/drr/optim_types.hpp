#pragma once

#include <stdexcept>
#include <string>

namespace drr {

enum class SceneKind { kGrid, kNett, kMnerf };

inline const char* scene_name(SceneKind kind) {
  switch (kind) {
    case SceneKind::kGrid: return "grid";
    case SceneKind::kNett: return "nett";
    case SceneKind::kMnerf: return "mnerf";
  }
  return "?";
}

inline SceneKind scene_from_name(const std::string& name) {
  if (name == "grid") return SceneKind::kGrid;
  if (name == "nett") return SceneKind::kNett;
  if (name == "mnerf") return SceneKind::kMnerf;
  throw std::invalid_argument("unknown scene kind: " + name);
}

}  // namespace drr
