#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pathmub/field_lattice.hpp"
#include "pathmub/mub_finite.hpp"
#include "pathmub/potential.hpp"

namespace pathmub::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumeric = 3;

/// Invalid configuration; maps to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    std::optional<std::string> config;
    std::optional<std::string> output;
    std::optional<std::uint64_t> seed;
    std::optional<double> window;
    std::optional<double> tol;
};

struct CommandResult {
    int exit_code = kExitOk;
    std::string output;      // file contents (CSV or JSON)
    std::string diagnostic;  // message for stderr when exit_code != 0
};

std::uint64_t fnv1a64(const std::string& bytes);
std::string config_hash(const nlohmann::json& config);

/// `# pathmub <version> config_hash=<hex> seed=<seed|none>`
std::string header_line(const nlohmann::json& config, std::optional<std::uint64_t> seed);

// Parsing helpers shared by the commands; all throw ConfigError with a JSON-pointer style path.
PhysicalUnits parse_units(const nlohmann::json& config);
GridSpec parse_grid(const nlohmann::json& config);
/// {"type": "free" | "harmonic" | "polynomial" | "tabulated", ...}; tabulated needs the grid.
PotentialSpec parse_potential(const nlohmann::json& node, const std::string& path,
                              const std::optional<GridSpec>& grid);
std::vector<double> parse_t_list(const nlohmann::json& config);
FieldConfig parse_field_config(const nlohmann::json& node, const std::string& path);
nlohmann::json field_config_json(const FieldConfig& field);

/// Square complex matrix as {"dim": M, "re": [[...]], "im": [[...]]}, row-major.
Eigen::MatrixXcd parse_matrix(const nlohmann::json& node);
nlohmann::json matrix_json(const Eigen::MatrixXcd& m);

const std::vector<std::string>& command_names();

/// Runs one command on an already parsed config; never throws.
CommandResult run_command(const std::string& name, const nlohmann::json& config, const GlobalOptions& opts);

/// Full front end: argument parsing, config loading, output writing. Returns the exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace pathmub::cli
