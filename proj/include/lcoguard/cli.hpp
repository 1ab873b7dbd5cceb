#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lcoguard/core_model.hpp"

namespace lcoguard {

/// Exit-code contract of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3 };

/// Validated input of one command: the system plus command parameters with
/// every default filled in.
struct RunConfig {
    std::string command;
    DimensionlessSystem system;
    nlohmann::json params = nlohmann::json::object();

    /// {"system": {...}, <params>}; parsing this reproduces the same RunConfig.
    nlohmann::json effective() const;
};

const std::vector<std::string>& command_names();

/// Parameter defaults of a command. Unknown command -> DomainError("command").
nlohmann::json command_defaults(const std::string& command);

/// Unknown keys, wrong types and invariant violations throw DomainError
/// naming the field.
RunConfig parse_config(const std::string& command, const nlohmann::json& doc);
/// Same, from JSON text; malformed JSON -> DomainError("config").
RunConfig parse_config_text(const std::string& command, const std::string& text);

struct OutputPaths {
    std::filesystem::path out;
    std::filesystem::path events;
    std::filesystem::path out_dir;
};

/// Runs one command. Writes its declared files and a short report to `log`.
void dispatch(const RunConfig& cfg, const OutputPaths& paths, std::ostream& log);

/// Figures with a canned configuration.
const std::vector<int>& supported_figures();

/// Writes the data files of one figure (all panels when `panel` is empty)
/// and returns their paths.
std::vector<std::filesystem::path> reproduce_figure(int figure, const std::string& panel,
                                                    const std::filesystem::path& out_dir, std::ostream& log);

/// Full command line without the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lcoguard
