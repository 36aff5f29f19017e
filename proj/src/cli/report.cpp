#include "nsblow/cli/report.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

namespace nsblow::cli {

namespace {
constexpr const char* kVersion = "1.0.0";

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

ReportTable& ReportBundle::table(const std::string& name) {
    for (auto& t : tables)
        if (t.name == name) return t;
    tables.push_back(ReportTable{name, {}});
    return tables.back();
}

void ReportBundle::record(const std::string& name, bool pass, double measure,
                          const std::string& detail) {
    audits.push_back(AuditResult{name, pass, measure, detail});
}

bool ReportBundle::all_pass() const {
    for (const auto& a : audits)
        if (!a.pass) return false;
    return true;
}

void emit_csv(const ReportBundle& bundle, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory: " + dir);
    for (const auto& t : bundle.tables) {
        fs::path p = fs::path(dir) / (t.name + ".csv");
        std::ofstream out(p, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + p.string());
        out << "k,t_k,value,error_estimate,tail_estimate\n";
        for (const auto& r : t.rows)
            out << r.k << ',' << fmt(r.t_k) << ',' << fmt(r.value) << ','
                << fmt(r.error_estimate) << ',' << fmt(r.tail_estimate)
                << '\n';
    }
}

void emit_structured(const ReportBundle& bundle, const ExperimentConfig& cfg,
                     const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::is_directory(dir))
        throw std::runtime_error("cannot create output directory: " + dir);
    nlohmann::ordered_json j;
    j["version"] = kVersion;
    j["config_hash"] = config_hash(cfg);
    j["config"] = serialize(cfg);
    nlohmann::ordered_json jt = nlohmann::ordered_json::object();
    for (const auto& t : bundle.tables) {
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& r : t.rows)
            rows.push_back({{"k", r.k},
                            {"t_k", r.t_k},
                            {"value", r.value},
                            {"error_estimate", r.error_estimate},
                            {"tail_estimate", r.tail_estimate}});
        jt[t.name] = std::move(rows);
    }
    j["tables"] = std::move(jt);
    nlohmann::ordered_json ja = nlohmann::ordered_json::array();
    for (const auto& a : bundle.audits)
        ja.push_back({{"name", a.name},
                      {"pass", a.pass},
                      {"measure", a.measure},
                      {"detail", a.detail}});
    j["audits"] = std::move(ja);
    j["all_pass"] = bundle.all_pass();

    fs::path p = fs::path(dir) / "report.json";
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << j.dump(2) << '\n';
}

}  // namespace nsblow::cli
