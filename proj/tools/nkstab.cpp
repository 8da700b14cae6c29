// nkstab: command-line driver for the verification suites.
//
//   nkstab verify model [--samples N] [--tol X] [--seed S] [--json PATH]
//   nkstab verify space <preset|file> [--samples N] [--tol X] [--seed S] [--json PATH]
//   nkstab list [--json]
//   nkstab export <preset> [-o PATH]
//
// Exit codes: 0 all checks pass, 1 some check failed, 2 bad flags or input.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nkstab/presets.hpp"
#include "nkstab/report.hpp"
#include "nkstab/space_io.hpp"
#include "nkstab/verify.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CommonFlags {
  int samples = 0;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  std::string json_path;
  std::vector<std::string> inject;
};

void add_common(CLI::App* cmd, CommonFlags& f, int default_samples) {
  f.samples = default_samples;
  cmd->add_option("--samples", f.samples, "random samples per randomized check")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol", f.tol, "override every check tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", f.seed, "seed for randomized checks")->capture_default_str();
  cmd->add_option("--json", f.json_path, "write the report document to PATH");
  std::vector<std::string> names(nkstab::known_injections().begin(), nkstab::known_injections().end());
  cmd->add_option("--inject", f.inject, "fault injection for negative controls (debug)")
      ->check(CLI::IsMember(names))
      ->group("Debug");
}

int emit(const nkstab::Report& report, const std::string& json_path) {
  std::cout << nkstab::format_table(report);
  if (!json_path.empty()) {
    std::ofstream out(json_path);
    if (!out) {
      std::cerr << "error: cannot write " << json_path << "\n";
      return kExitUsage;
    }
    out << nkstab::report_to_json(report) << "\n";
  }
  return report.all_pass() ? 0 : kExitFail;
}

int run_list(bool as_json) {
  const auto& cat = nkstab::preset_catalog();
  if (as_json) {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& p : cat)
      doc.push_back({{"name", p.name}, {"description", p.description}, {"group_dim", p.group_dim},
                     {"dim", 6}, {"b2", p.b2}, {"b3", p.b3}});
    std::cout << doc.dump(2) << "\n";
    return 0;
  }
  for (const auto& p : cat)
    std::cout << p.name << "  dim G = " << p.group_dim << "  b2 sector = " << p.b2 << "  b3 sector = " << p.b3
              << "  " << p.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification engine for nearly-Kaehler 6-manifolds and their Einstein stability"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->require_subcommand(1);

  CommonFlags model_flags;
  auto* model = verify->add_subcommand("model", "flat SU(3)-structure identities");
  add_common(model, model_flags, 1000);

  CommonFlags space_flags;
  std::string target;
  auto* space = verify->add_subcommand("space", "full pipeline on a preset or a space-definition file");
  space->add_option("space", target, "preset name or path to a JSON space definition")->required();
  add_common(space, space_flags, 20);

  bool list_json = false;
  auto* list = app.add_subcommand("list", "list built-in spaces");
  list->add_flag("--json", list_json, "machine-readable output");

  std::string export_name;
  std::string export_path;
  auto* exp = app.add_subcommand("export", "write a preset as a space-definition document");
  exp->add_option("preset", export_name, "preset name")->required();
  exp->add_option("-o,--output", export_path, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*model) {
      nkstab::ModelOptions opts;
      opts.samples = model_flags.samples;
      opts.tol = model_flags.tol;
      opts.seed = model_flags.seed;
      opts.inject.insert(model_flags.inject.begin(), model_flags.inject.end());
      return emit(nkstab::verify_model(opts), model_flags.json_path);
    }
    if (*space) {
      nkstab::SpaceOptions opts;
      opts.samples = space_flags.samples;
      opts.tol = space_flags.tol;
      opts.seed = space_flags.seed;
      opts.inject.insert(space_flags.inject.begin(), space_flags.inject.end());
      nkstab::SpaceDefinition def;
      if (nkstab::is_preset(target)) {
        def = nkstab::preset_definition(target);
        for (const auto& p : nkstab::preset_catalog())
          if (p.name == target) {
            opts.expected_b2 = p.b2;
            opts.expected_b3 = p.b3;
          }
      } else {
        if (!std::filesystem::exists(target)) {
          std::cerr << "error: '" << target << "' is neither a preset nor an existing file\n";
          return kExitUsage;
        }
        def = nkstab::read_space_file(target);
      }
      return emit(nkstab::verify_space(def, opts), space_flags.json_path);
    }
    if (*list) return run_list(list_json);
    if (*exp) {
      const nkstab::SpaceDefinition def = nkstab::preset_definition(export_name);
      if (export_path.empty()) {
        std::cout << nkstab::dump_space(def) << "\n";
      } else {
        nkstab::write_space_file(export_path, def);
      }
      return 0;
    }
  } catch (const std::exception& e) {
    // Load failures (SpaceError) and rejected options (invalid_argument).
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
