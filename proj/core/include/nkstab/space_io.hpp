#pragma once

// Space-definition documents (JSON).
//
//   {
//     "name": "s3xs3",
//     "dim": 9,
//     "structure_constants": [{"i": 0, "j": 1, "k": 2, "value": 1.0}, ...],
//     "h_indices": [0, 1, 2],
//     "m_indices": [3, 4, 5, 6, 7, 8],
//     "metric_m": "normal",            // or a dense 6x6 array of rows
//     "normal_scale": 1.0,             // only with "normal"
//     "J": [[...], ...]                // 6x6, rows, in the m_indices basis
//   }
//
// Only [e_i, e_j] for the listed (i, j) is given; [e_j, e_i] follows by
// antisymmetry.  Doubles are written with round-trip precision, so
// parse_space(dump_space(d)) == d bit for bit.

#include <filesystem>
#include <string>
#include <string_view>

#include "nkstab/homogeneous.hpp"

namespace nkstab {

std::string dump_space(const SpaceDefinition& def);
/// Throws SpaceError on malformed documents.
SpaceDefinition parse_space(std::string_view text);

SpaceDefinition read_space_file(const std::filesystem::path& path);
void write_space_file(const std::filesystem::path& path, const SpaceDefinition& def);

/// Field-by-field exact comparison.
bool identical(const SpaceDefinition& a, const SpaceDefinition& b);

}  // namespace nkstab
