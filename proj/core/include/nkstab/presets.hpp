#pragma once

// Built-in nearly-Kaehler homogeneous spaces.  Each is a 3-symmetric space
// G/H with its normal metric; the structure constants are computed from a
// matrix realization of g, and J = (1 + 2 sigma)/sqrt(3) on m, where sigma is
// the order-three automorphism fixing h.

#include <string>
#include <string_view>
#include <vector>

#include "nkstab/homogeneous.hpp"

namespace nkstab {

struct PresetInfo {
  std::string name;
  std::string description;
  int group_dim = 0;
  int b2 = 0;  ///< expected dimension of the harmonic invariant 2-forms
  int b3 = 0;  ///< expected dimension of the harmonic invariant 3-forms
};

const std::vector<PresetInfo>& preset_catalog();
bool is_preset(std::string_view name);
/// Throws SpaceError for unknown names.
SpaceDefinition preset_definition(std::string_view name);

}  // namespace nkstab
