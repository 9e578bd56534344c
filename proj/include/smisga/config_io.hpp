#pragma once

#include "smisga/bench.hpp"
#include "smisga/solvers.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace smisga {

/// Bad key, type or value in a configuration file.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Contents of a JSON run configuration. Absent keys stay unset so that
/// command-line flags and built-in defaults can fill them.
///
/// {
///   "solver": { "mu": 0.00390625, "theta": 1e-10, "window_N": 10, ... },
///   "grid":   { "ensembles": ["gaussian"], "n": [1024], "delta": [0.1],
///               "rho": [0.1], "noise_h": [1, 7] },
///   "solvers": ["smisga", "isga"],
///   "seed": 20240917,
///   "jobs": 4
/// }
struct RunConfig {
    SolverConfig solver;
    /// Axes given under "grid"; missing axes take the full-grid values.
    std::optional<GridAxes> grid;
    std::optional<std::vector<std::string>> solvers;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

/// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_run_config(const nlohmann::json& j);
/// Throws std::runtime_error when the file cannot be read, ConfigError otherwise.
RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const SolverConfig& cfg);
nlohmann::json to_json(const GridAxes& axes);

}  // namespace smisga
