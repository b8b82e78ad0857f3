#pragma once

#include <string>

#include "solsched/params.hpp"
#include "solsched/simulator.hpp"
#include "solsched/solvers.hpp"

namespace solsched {

/// Everything a configuration file can specify. solver/simulation sections
/// are optional and default as in SolverConfig / SimConfig.
struct ConfigBundle {
    SystemParams system;
    SolverConfig solver;
    SimConfig sim;
};

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Parses a JSON configuration document. Unknown keys are rejected; parse
/// errors carry line/column information. Layout documented in README.md.
ConfigBundle parse_config(const std::string& text);

/// parse_config over the contents of `path`.
ConfigBundle load_config(const std::string& path);

/// Serializes the bundle back to a JSON document (sweep uses this to rewrite
/// one parameter and revalidate through the same code path).
std::string dump_config(const ConfigBundle& bundle);

/// Reads a dotted path (e.g. "traffic.classes.0.arrival_rate") out of /
/// writes a value into a config document.
std::string set_config_value(const std::string& text, const std::string& dotted_path,
                             double value);

}  // namespace solsched
