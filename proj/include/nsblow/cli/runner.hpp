#pragma once

#include "nsblow/cli/config.hpp"
#include "nsblow/cli/report.hpp"

namespace nsblow::cli {

/// Each suite appends its tables and audits to the bundle. Evaluator
/// failures inside a suite are recorded as failing audits; the run
/// continues.
void run_heat(const ExperimentConfig& cfg, ReportBundle& bundle);
void run_velocity(const ExperimentConfig& cfg, ReportBundle& bundle);
void run_audit(const ExperimentConfig& cfg, ReportBundle& bundle);
void run_picard(const ExperimentConfig& cfg, ReportBundle& bundle);
void run_baseline(const ExperimentConfig& cfg, ReportBundle& bundle);

/// Dispatches one of {heat, velocity, audit, picard, baseline, all}.
/// Returns the process exit status: 0 iff every audit passed.
int run(const std::string& subcommand, const ExperimentConfig& cfg,
        ReportBundle& bundle);

}  // namespace nsblow::cli
