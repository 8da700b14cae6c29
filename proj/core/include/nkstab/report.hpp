#pragma once

// Verification reports: named residual checks plus optional stability data,
// with a lossless JSON encoding.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nkstab/stability.hpp"

namespace nkstab {

struct CheckRecord {
  std::string id;
  double residual = 0;
  double tolerance = 0;
  bool pass = false;  ///< residual <= tolerance (false for NaN)
  std::string context;
  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

/// A recorded observation that is not a pass/fail gate.
struct Finding {
  std::string id;
  std::string text;
  std::vector<std::pair<std::string, double>> values;
  friend bool operator==(const Finding&, const Finding&) = default;
};

struct Report {
  std::string version = "1.0";
  std::string context;
  std::vector<CheckRecord> checks;
  std::vector<Finding> findings;
  std::optional<StabilityReport> stability;

  const CheckRecord& add(std::string id, double residual, double tolerance);
  [[nodiscard]] int passed() const;
  [[nodiscard]] int failed() const;
  [[nodiscard]] bool all_pass() const { return failed() == 0; }
  /// nullptr when absent.
  [[nodiscard]] const CheckRecord* find(std::string_view id) const;
  [[nodiscard]] const Finding* find_finding(std::string_view id) const;
};

bool operator==(const Destabilizer& a, const Destabilizer& b);
bool operator==(const StabilityReport& a, const StabilityReport& b);
bool operator==(const Report& a, const Report& b);

std::string report_to_json(const Report& report, int indent = 2);
/// Throws std::invalid_argument on malformed input.
Report report_from_json(std::string_view text);

/// Fixed-width text table of the checks.
std::string format_table(const Report& report);

}  // namespace nkstab
