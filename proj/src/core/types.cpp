#include "smc/core/types.hpp"

#include <cmath>
#include <string>

#include "smc/core/error.hpp"

namespace smc {

const char* to_string(LabelKind kind) {
  switch (kind) {
    case LabelKind::environment_state: return "environment_state";
    case LabelKind::object_id: return "object_id";
    case LabelKind::background: return "background";
    case LabelKind::none: break;
  }
  return "none";
}

void validate_sensory(const SensoryInput& input, std::size_t dim) {
  if (input.size() != dim) {
    throw ValidationError("sensory input has length " + std::to_string(input.size()) +
                          ", expected " + std::to_string(dim));
  }
  for (double v : input.values) {
    if (!std::isfinite(v)) throw ValidationError("sensory input contains a non-finite value");
  }
}

}  // namespace smc
