// config.hpp - JSON run configuration.
//
// {
//   "params":  {"g_sqrtN": 10, "gamma": 0.25, "gamma0": 0, "kappa": 1, "N": 1,
//               "gamma1": ..., "gamma2": ..., "ground_dephasing": "dark_bright"},
//   "drive":   {"Omega1": 0.5, "Omega2": 0.5},
//   "inputs":  {"field1": {"kind": "coherent"},
//               "field2": {"kind": "squeezed", "squeeze_db": 3.01, "angle_rad": 0}},
//   "scan":    {"omega": {"min": 1e-4, "max": 1e3, "points": 400, "spacing": "log"},
//               "C": {...}, "Omega1": {...}, "Omega2": {...}},
//   "theta": 0, "conjugate_quadrature": false, "analysis_omega": 0.1,
//   "tolerance": 1e-6, "output": "out", "seed": 1,
//   "oracle":  {"probes": [...], "duration": 1e6, "step": 0.05, "segment": 1256.6,
//               "bins": 8, "chains": 8}
// }
//
// All rates are in units of kappa. Every key is optional except the params
// block; unknown keys are rejected.

#pragma once

#include "qswap/experiments.hpp"
#include "qswap/oracle.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qswap::config {

struct InputSpec {
    std::string kind = "coherent";  // coherent | squeezed
    double squeeze_db = 0.0;
    double angle_rad = 0.0;

    GaussianInputState state() const;
    bool operator==(const InputSpec&) const = default;
};

struct ParamsSpec {
    double g_sqrtN = 0.0;
    double gamma = 0.0;
    double gamma0 = 0.0;
    double kappa = 1.0;
    double N = 1.0;
    std::optional<double> gamma1;
    std::optional<double> gamma2;
    std::string ground_dephasing = "dark_bright";

    model::RawParams raw() const;
    bool operator==(const ParamsSpec&) const = default;
};

struct AxisConfig {
    double min = 0.0;
    double max = 0.0;
    int points = 1;
    std::string spacing = "log";  // log | linear

    experiments::AxisSpec spec(const std::string& name) const;
    bool operator==(const AxisConfig&) const = default;
};

struct OracleSpec {
    std::vector<double> probes{0.0707, 0.2, 0.5, 1.0, 2.0};
    double duration = 1.0e6;
    double step = 0.05;
    double segment = 400.0 * 3.14159265358979323846;
    int bins = 8;
    int chains = 8;

    bool operator==(const OracleSpec&) const = default;
};

struct RunConfig {
    ParamsSpec params;
    double Omega1 = 0.5;
    double Omega2 = 0.5;
    InputSpec field1;
    InputSpec field2;
    AxisConfig omega{1e-4, 1e3, 400, "log"};
    AxisConfig C{1.0, 1e3, 60, "log"};
    AxisConfig Omega1_axis{0.01, 1.0, 40, "log"};
    AxisConfig Omega2_axis{0.01, 1.0, 40, "log"};
    double theta = 0.0;
    bool conjugate_quadrature = false;
    double analysis_omega = 0.1;
    double tolerance = 1e-6;
    std::string output = "out";
    std::uint64_t seed = 1;
    OracleSpec oracle;

    bool operator==(const RunConfig&) const = default;

    // Validated model parameters; warnings are appended to *warnings.
    model::SystemParams system(std::vector<std::string>* warnings = nullptr) const;
    model::DriveSpec drive() const { return {Omega1, Omega2, 0.0}; }
    spectra::InputPair inputs() const { return {field1.state(), field2.state()}; }
};

// Throws ConfigError on syntax errors (with line number), unknown keys (with
// a suggestion), wrong types, and invalid enumerations.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Fully resolved configuration as pretty-printed JSON (defaults included).
std::string serialize_config(const RunConfig& cfg);

// Closest candidate by edit distance, if reasonably close.
std::optional<std::string> suggest_key(const std::string& key, const std::vector<std::string>& candidates);

} // namespace qswap::config
