#include "smisga/config_io.hpp"

#include <fstream>
#include <set>

namespace smisga {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + ": expected an object");
    for (const auto& [key, value] : obj.items())
        if (!known.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + "." + key + ": wrong type");
    }
}

template <class T>
std::vector<T> read_list(const json& obj, const char* key, const std::string& where) {
    std::vector<T> out;
    read(obj, key, out, where);
    if (out.empty()) throw ConfigError(where + "." + key + ": must be a non-empty list");
    return out;
}

SolverConfig parse_solver(const json& j) {
    reject_unknown(j,
                   {"mu", "theta", "tau_min", "tau_max", "eta_min", "eta_max", "window_N", "ftol", "max_iter",
                    "backtrack_factor", "max_backtracks", "dtol", "theta1", "theta2", "upper_bound_gate", "allow_expansion"},
                   "solver");
    SolverConfig c;
    read(j, "mu", c.mu, "solver");
    read(j, "theta", c.theta, "solver");
    read(j, "tau_min", c.tau_min, "solver");
    read(j, "tau_max", c.tau_max, "solver");
    read(j, "eta_min", c.eta_min, "solver");
    read(j, "eta_max", c.eta_max, "solver");
    read(j, "window_N", c.window_N, "solver");
    read(j, "ftol", c.ftol, "solver");
    read(j, "max_iter", c.max_iter, "solver");
    read(j, "backtrack_factor", c.backtrack_factor, "solver");
    read(j, "max_backtracks", c.max_backtracks, "solver");
    read(j, "dtol", c.dtol, "solver");
    read(j, "theta1", c.theta1, "solver");
    read(j, "theta2", c.theta2, "solver");
    read(j, "upper_bound_gate", c.upper_bound_gate, "solver");
    read(j, "allow_expansion", c.allow_expansion, "solver");
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("solver: ") + e.what());
    }
    return c;
}

GridAxes parse_grid(const json& j) {
    reject_unknown(j, {"ensembles", "n", "delta", "rho", "noise_h"}, "grid");
    GridAxes g = GridAxes::full();
    if (j.contains("ensembles")) {
        g.ensembles.clear();
        for (const auto& name : read_list<std::string>(j, "ensembles", "grid")) {
            try {
                g.ensembles.push_back(parse_ensemble(name));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("grid.ensembles: ") + e.what());
            }
        }
    }
    if (j.contains("n")) g.n = read_list<Index>(j, "n", "grid");
    if (j.contains("delta")) g.delta = read_list<double>(j, "delta", "grid");
    if (j.contains("rho")) g.rho = read_list<double>(j, "rho", "grid");
    if (j.contains("noise_h")) g.noise_h = read_list<int>(j, "noise_h", "grid");

    for (Index n : g.n)
        if (!is_power_of_two(n)) throw ConfigError("grid.n: " + std::to_string(n) + " is not a power of two");
    for (double v : g.delta)
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("grid.delta: values must lie in (0, 1]");
    for (double v : g.rho)
        if (!(v > 0.0 && v <= 1.0)) throw ConfigError("grid.rho: values must lie in (0, 1]");
    for (int h : g.noise_h)
        if (h < 0) throw ConfigError("grid.noise_h: values must be nonnegative");
    return g;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
    reject_unknown(j, {"solver", "grid", "solvers", "seed", "jobs"}, "config");
    RunConfig rc;
    if (j.contains("solver")) rc.solver = parse_solver(j.at("solver"));
    if (j.contains("grid")) rc.grid = parse_grid(j.at("grid"));
    if (j.contains("solvers")) {
        rc.solvers = read_list<std::string>(j, "solvers", "config");
        for (const auto& s : *rc.solvers)
            if (!is_registered_solver(s)) throw ConfigError("config.solvers: unknown solver '" + s + "'");
    }
    if (j.contains("seed")) {
        std::uint64_t s = 0;
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("config.seed: expected a nonnegative integer");
        read(j, "seed", s, "config");
        rc.seed = s;
    }
    if (j.contains("jobs")) {
        int n = 0;
        read(j, "jobs", n, "config");
        if (n < 1) throw ConfigError("config.jobs: must be at least 1");
        rc.jobs = n;
    }
    return rc;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config '" + path + "'");
    json j;
    try {
        j = json::parse(is);
    } catch (const json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_run_config(j);
}

json to_json(const SolverConfig& c) {
    return {{"mu", c.mu},
            {"theta", c.theta},
            {"tau_min", c.tau_min},
            {"tau_max", c.tau_max},
            {"eta_min", c.eta_min},
            {"eta_max", c.eta_max},
            {"window_N", c.window_N},
            {"ftol", c.ftol},
            {"max_iter", c.max_iter},
            {"backtrack_factor", c.backtrack_factor},
            {"max_backtracks", c.max_backtracks},
            {"dtol", c.dtol},
            {"theta1", c.theta1},
            {"theta2", c.theta2},
            {"upper_bound_gate", c.upper_bound_gate},
            {"allow_expansion", c.allow_expansion}};
}

json to_json(const GridAxes& g) {
    json ens = json::array();
    for (auto k : g.ensembles) ens.push_back(std::string(to_string(k)));
    return {{"ensembles", ens}, {"n", g.n}, {"delta", g.delta}, {"rho", g.rho}, {"noise_h", g.noise_h}};
}

}  // namespace smisga
