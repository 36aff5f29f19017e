#include "nsblow/cli/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nsblow::cli {

heat::Variant ExperimentConfig::variant_enum() const {
    if (variant == "critical-a") return heat::Variant::CriticalA;
    if (variant == "critical-log-b") return heat::Variant::CriticalLogB;
    if (variant == "scaled-log-b") return heat::Variant::ScaledLogB;
    throw ConfigError("config key 'variant': unknown value '" + variant +
                      "' (expected critical-a | critical-log-b | "
                      "scaled-log-b)");
}

void ExperimentConfig::validate() const {
    variant_enum();
    if (!(T > 0.0)) throw ConfigError("config key 'T': must be positive");
    if (k_max < 1 || k_max > 30)
        throw ConfigError("config key 'k_max': must be in [1, 30]");
    if (!(grid_L > 0.0))
        throw ConfigError("config key 'grid_L': must be positive");
    if (grid_n < 8 || grid_n % 2 != 0)
        throw ConfigError("config key 'grid_n': must be even and >= 8");
    if (!(tol > 0.0)) throw ConfigError("config key 'tol': must be positive");
    if (!(delta >= 0.0))
        throw ConfigError("config key 'delta': must be non-negative");
    if (out.empty()) throw ConfigError("config key 'out': must be non-empty");
}

namespace {
double parse_double(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v +
                          "'");
    }
    if (pos != v.size())
        throw ConfigError("config key '" + key + "': trailing characters in '" +
                          v + "'");
    return d;
}

long parse_long(const std::string& key, const std::string& v) {
    std::size_t pos = 0;
    long n;
    try {
        n = std::stol(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v +
                          "'");
    }
    if (pos != v.size())
        throw ConfigError("config key '" + key + "': trailing characters in '" +
                          v + "'");
    return n;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "on") return true;
    if (v == "false" || v == "0" || v == "off") return false;
    throw ConfigError("config key '" + key + "': not a boolean: '" + v + "'");
}
}  // namespace

void apply_key(ExperimentConfig& cfg, const std::string& key,
               const std::string& value) {
    if (key == "variant") cfg.variant = value;
    else if (key == "T") cfg.T = parse_double(key, value);
    else if (key == "k_max") cfg.k_max = static_cast<int>(parse_long(key, value));
    else if (key == "grid_L") cfg.grid_L = parse_double(key, value);
    else if (key == "grid_n") cfg.grid_n = static_cast<int>(parse_long(key, value));
    else if (key == "tol") cfg.tol = parse_double(key, value);
    else if (key == "delta") cfg.delta = parse_double(key, value);
    else if (key == "seed") cfg.seed = static_cast<unsigned>(parse_long(key, value));
    else if (key == "out") cfg.out = value;
    else if (key == "audit_bounds") cfg.audit_bounds = parse_bool(key, value);
    else if (key == "audit_symmetry") cfg.audit_symmetry = parse_bool(key, value);
    else if (key == "audit_energy") cfg.audit_energy = parse_bool(key, value);
    else if (key == "audit_criticality")
        cfg.audit_criticality = parse_bool(key, value);
    else
        throw ConfigError("unknown config key '" + key + "'");
}

namespace {
std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}
}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    ExperimentConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line.substr(0, line.find('#')));
        if (s.empty()) continue;
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + s + "'");
        try {
            apply_key(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(path + ":" + std::to_string(lineno) + ": " +
                              e.what());
        }
    }
    cfg.validate();
    return cfg;
}

std::string serialize(const ExperimentConfig& cfg) {
    char num[64];
    std::ostringstream os;
    auto put = [&](const char* key, double v) {
        std::snprintf(num, sizeof num, "%.17g", v);
        os << key << " = " << num << "\n";
    };
    os << "variant = " << cfg.variant << "\n";
    put("T", cfg.T);
    os << "k_max = " << cfg.k_max << "\n";
    put("grid_L", cfg.grid_L);
    os << "grid_n = " << cfg.grid_n << "\n";
    put("tol", cfg.tol);
    put("delta", cfg.delta);
    os << "seed = " << cfg.seed << "\n";
    os << "out = " << cfg.out << "\n";
    os << "audit_bounds = " << (cfg.audit_bounds ? "true" : "false") << "\n";
    os << "audit_symmetry = " << (cfg.audit_symmetry ? "true" : "false") << "\n";
    os << "audit_energy = " << (cfg.audit_energy ? "true" : "false") << "\n";
    os << "audit_criticality = " << (cfg.audit_criticality ? "true" : "false")
       << "\n";
    return os.str();
}

std::string config_hash(const ExperimentConfig& cfg) {
    // FNV-1a 64-bit of the canonical serialization
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : serialize(cfg)) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace nsblow::cli
