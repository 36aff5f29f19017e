#pragma once

#include <stdexcept>
#include <string>

#include "nsblow/heat/forcing.hpp"

namespace nsblow::cli {

/// Raised by config parsing/validation; what() names the offending key (and
/// the line number when parsing a file).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// All experiment knobs. Defaults are the full "desk scale"; the smoke scale
/// is k_max = 4, grid_n = 32.
struct ExperimentConfig {
    std::string variant = "critical-log-b";  // critical-a | critical-log-b
                                             // | scaled-log-b
    double T = 1.0;          // final (blow-up) time
    int k_max = 12;          // time ladder depth t_k = T (1 - 2^-k)
    double grid_L = 6.0;     // half-width of the norm-report lattice
    int grid_n = 48;         // lattice cells per axis (even)
    double tol = 1e-6;       // quadrature / fixed-point tolerance
    double delta = 0.01;     // amplitude for the perturbation suites
    unsigned seed = 7;       // sample-cloud generator seed
    std::string out = "reports";

    // audit selection (all on by default)
    bool audit_bounds = true;
    bool audit_symmetry = true;
    bool audit_energy = true;
    bool audit_criticality = true;

    heat::Variant variant_enum() const;

    /// Throws ConfigError naming the first invalid key.
    void validate() const;
};

/// Parses a human-readable `key = value` file ('#' starts a comment; keys
/// match the struct field names). Unknown keys and unparseable values are
/// diagnosed with their line number. The result is validated.
ExperimentConfig load_config(const std::string& path);

/// Applies one key=value assignment (shared by the file parser and tests).
void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value);

/// Stable hash of the canonical serialization, recorded in reports so a
/// bundle can be matched to the exact configuration that produced it.
std::string config_hash(const ExperimentConfig& cfg);

/// Canonical key=value serialization (also the determinism contract).
std::string serialize(const ExperimentConfig& cfg);

}  // namespace nsblow::cli
