#pragma once

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace csrkit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitConvergence = 3;

/// Runs the tool in-process. `args[0]` is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CommandResult {
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string manifest_path;
};

/// Executes one command from its fully resolved configuration and writes its
/// outputs. Commands: "generate two-gaussians", "generate dns-surrogate",
/// "split", "train", "calibrate", "evaluate", "sweep", "region".
CommandResult execute(const std::string& command, const nlohmann::json& config);

}  // namespace csrkit::cli
