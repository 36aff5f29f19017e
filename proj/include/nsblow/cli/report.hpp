#pragma once

#include <string>
#include <vector>

#include "nsblow/cli/config.hpp"

namespace nsblow::cli {

/// One CSV row. Columns are fixed and ordered:
/// k, t_k, value, error_estimate, tail_estimate.
struct ReportRow {
    int k = 0;
    double t_k = 0.0;
    double value = 0.0;
    double error_estimate = 0.0;
    double tail_estimate = 0.0;
};

struct ReportTable {
    std::string name;  // file stem, e.g. "blowup_fit"
    std::vector<ReportRow> rows;
};

/// One pass/fail audit with its headline number and a short explanation.
struct AuditResult {
    std::string name;
    bool pass = false;
    double measure = 0.0;
    std::string detail;
};

struct ReportBundle {
    std::vector<ReportTable> tables;
    std::vector<AuditResult> audits;

    ReportTable& table(const std::string& name);
    void record(const std::string& name, bool pass, double measure,
                const std::string& detail);
    bool all_pass() const;
};

/// Writes one <table>.csv per table into dir (created if missing). Bodies
/// are byte-deterministic for a fixed bundle.
void emit_csv(const ReportBundle& bundle, const std::string& dir);

/// Writes report.json: every table and audit plus metadata (config hash,
/// serialized config, version).
void emit_structured(const ReportBundle& bundle, const ExperimentConfig& cfg,
                     const std::string& dir);

}  // namespace nsblow::cli
