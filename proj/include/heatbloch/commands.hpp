#pragma once

#include "heatbloch/caloric.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace heatbloch {

inline constexpr int kSchemaVersion = 1;

/// Process exit codes of the command-line tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInvalidInput = 2,
  kExitNumericalFailure = 3,
};

/// Everything a command needs. Loaded from a JSON config file, then overridden by flags.
struct RunConfig {
  std::filesystem::path map_source;
  std::optional<double> gamma;
  std::optional<double> r0;
  double sigma = 0.5;
  std::optional<double> a_m;
  std::optional<double> K;
  double k_safety = 1.05;
  double am_safety = 2.0;
  std::size_t sample_budget = 4096;
  std::size_t radii_grid_size = 32;
  std::vector<double> am_radii = {0.3, 0.5, 0.7, 0.9};
  double chord_tol = 1e-12;
  int max_iter = 200;
  double ratio_tol = 1e-8;
  double uniqueness_tol = 1e-9;
  std::size_t pair_budget = 2000;
  std::size_t n_targets = 200;
  std::uint64_t seed = 0;
  // Inputs of invert/verify: a certify report and the certificate to use from it.
  std::filesystem::path certificate;
  std::string branch = "origin";
  double eta_scale = 1.0;
  // Worker threads; results do not depend on it, so it is never echoed into reports.
  int threads = 1;
};

/// Reads a config document; relative paths resolve against the file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json echo_config(const RunConfig& cfg);

/// Checks tolerances, budgets and ranges common to all commands.
void validate(const RunConfig& cfg);

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

struct CommandResult {
  nlohmann::json report;
  std::vector<CsvTable> tables;
  int exit_code = kExitOk;
};

CommandResult cmd_estimate_k(const RunConfig& cfg);
CommandResult cmd_certify(const RunConfig& cfg);
CommandResult cmd_invert(const RunConfig& cfg, const Vector& w);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_constants();

/// Report text: pretty JSON, or the CSV tables, UTF-8 with LF line endings.
std::string render_json(const CommandResult& result);
std::string render_csv(const CommandResult& result);

}  // namespace heatbloch
