#pragma once

// Verification suites: the flat SU(3) model and full homogeneous-space
// pipelines.  Each suite fills a Report; a suite passes iff every check does.

#include <cstdint>
#include <optional>
#include <set>
#include <string>

#include "nkstab/homogeneous.hpp"
#include "nkstab/report.hpp"

namespace nkstab {

/// Default tolerances.
inline constexpr double kFlatTolerance = 1e-12;
inline constexpr double kAlgebraTolerance = 1e-10;
inline constexpr double kChainTolerance = 1e-9;

/// Fault injections used as negative controls.
///   flip-omega-plus   replace Omega^+ by -Omega^+ after it is built
///   perturb-metric    stretch the metric on one isotropy submodule (spaces only)
///   non-primitive     add omega to harmonic 2-forms and Omega^+ to harmonic
///                     3-forms before building destabilizers (spaces only)
const std::set<std::string>& known_injections();

struct ModelOptions {
  int samples = 1000;
  std::optional<double> tol;  ///< overrides every tolerance when set
  std::uint64_t seed = 0;
  std::set<std::string> inject;
};

/// Throws std::invalid_argument for samples < 1 or unknown injections.
Report verify_model(const ModelOptions& opts);

struct SpaceOptions {
  int samples = 20;  ///< random Lambda^3_12 samples for pointwise identities
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::set<std::string> inject;
  double perturbation = 0.1;  ///< stretch factor for perturb-metric
  /// Expected harmonic sector sizes (from the preset catalog), if known.
  std::optional<int> expected_b2;
  std::optional<int> expected_b3;
};

/// Runs the whole pipeline.  Throws SpaceError if the definition does not
/// load; check failures are recorded in the report, not thrown.
Report verify_space(const SpaceDefinition& def, const SpaceOptions& opts);

/// Metric stretched by (1 + t) on the isotropy submodule generated by the
/// first m basis vector.  Throws SpaceError when that submodule is all of m
/// (a homothety would stay Einstein).
SpaceDefinition perturbed_metric(const SpaceDefinition& def, double t);

}  // namespace nkstab
