#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dloc_cli/config.hpp"
#include "dloc_cli/csv.hpp"
#include "dloc_cli/manifest.hpp"

namespace dloc::cli {

struct ModeResult {
    std::vector<std::pair<std::string, CsvTable>> tables;  // file name, content
    std::vector<Failure> failures;
};

ModeResult run_sweep(const ExperimentConfig& c, int workers);
ModeResult run_diag(const ExperimentConfig& c, int workers);
ModeResult run_evolve(const ExperimentConfig& c, int workers);
ModeResult run_verify_wick(const ExperimentConfig& c, int workers);
ModeResult run_resolvent_norms(const ExperimentConfig& c, int workers);
ModeResult run_schedule(const ExperimentConfig& c);
ModeResult run_bounds(const ExperimentConfig& c);

ModeResult run_mode(const ExperimentConfig& c, int workers);

// Runs the mode, writes every table plus manifest.json into out_dir.
RunManifest run(const ExperimentConfig& c, const std::string& out_dir, int workers);

const char* artifact_version();

}  // namespace dloc::cli
