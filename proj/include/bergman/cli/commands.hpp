#pragma once

#include "bergman/cli/config.hpp"
#include "bergman/discretize.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace bergman::cli {

enum ExitCode : int { kExitPass = 0, kExitProbeFail = 1, kExitConfig = 2, kExitNumeric = 3 };

inline const char* const kVersion = "0.1.0";

inline const std::vector<std::string>& probe_names() {
    static const std::vector<std::string> names{"deletion",   "insertion",   "palm-oracle", "conditional-oracle",
                                                "coupling",   "domination",  "trace-bound", "gaf",
                                                "annulus-check"};
    return names;
}

struct Experiment {
    DppKernel kernel;
    std::optional<Grid> grid; // present for grid-based kernel modes
};

// Kernel described by the kernel.* and domain.* keys.
Experiment build_experiment(const ExperimentConfig& cfg);

// Sites selected by probe.subset: "disk_radius < r" (Euclidean norm of the
// grid node) or an index list.
std::vector<std::size_t> select_subset(const ExperimentConfig& cfg, const Experiment& ex);

// Each command writes config.resolved and manifest.json into `out` and
// returns an exit code; exceptions propagate.
int cmd_sample(const ExperimentConfig& cfg, const std::filesystem::path& out);
int cmd_probe(const ExperimentConfig& cfg, const std::string& probe, const std::filesystem::path& out);
// Collects every report.json below `dir` into dir/summary.md.
int cmd_report(const std::filesystem::path& dir);

// Parses argv and maps exceptions onto exit codes.
int run_cli(int argc, char** argv);

} // namespace bergman::cli
