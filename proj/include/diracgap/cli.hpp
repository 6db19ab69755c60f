#pragma once

#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace diracgap::cli {

struct RunConfig {
  std::string command;
  nlohmann::json config = nlohmann::json::object();  // user overrides of the command defaults
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

const std::vector<std::string>& command_names();

// Command defaults merged with user overrides and the --seed/--tol flags. Unknown keys are rejected.
nlohmann::json resolved_config(const RunConfig& run);

// Each command writes its CSV files and summary.json into out_dir and returns the summary.
nlohmann::json cmd_keller_1d(const RunConfig& run);
nlohmann::json cmd_bs_spectrum(const RunConfig& run);
nlohmann::json cmd_radial(const RunConfig& run);
nlohmann::json cmd_scf(const RunConfig& run);
nlohmann::json cmd_lt(const RunConfig& run);
nlohmann::json cmd_wp_exact(const RunConfig& run);
nlohmann::json run_command(const RunConfig& run);

// 0 success, 2 validation, 3 convergence, 4 supercritical, 1 anything else.
int exit_code_for(const std::exception_ptr& e);

int main_entry(int argc, char** argv);

}  // namespace diracgap::cli
