#pragma once

/// \file cli.hpp
/// Command-line dispatcher: configuration parsing, subcommands and
/// deterministic output files.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "membrane/evolver.hpp"

namespace membrane {

/// Exit codes of the command-line tool.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Environment variable that overrides the output directory.
inline constexpr const char* kOutDirEnv = "MEMBRANE_OUT_DIR";

/// SimConfig from JSON; unknown keys are rejected.
SimConfig sim_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SimConfig& c);
nlohmann::json to_json(const EnergyReport& r);
nlohmann::json to_json(const Emission& e);

/// Runs the tool on argv (argv[0] is the program name) and returns the exit code.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int dispatch(int argc, const char* const* argv);

}  // namespace membrane
