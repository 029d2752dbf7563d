#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "cli/experiment.hpp"

namespace vgt::cli {

// Process exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;

// Each command returns an exit status. Library errors propagate; main maps
// them with exit_code_for.
int run_ga(const ExperimentConfig& config, const std::optional<fs::path>& resume, std::ostream& out);

int run_rl(const ExperimentConfig& config, const std::optional<fs::path>& genome,
           const std::string& objective, std::ostream& out);

// With a policy the truss is driven closed-loop (deterministic actions);
// otherwise the genome's open-loop control sequence is replayed. Prints one
// "name score" line per objective, or only the selected objective.
int simulate(const ExperimentConfig& config, const fs::path& genome,
             const std::optional<fs::path>& policy, const std::string& objective, std::ostream& out);

// Invariant report for a genome against a truss. Prints PASS/FAIL per check.
int validate(const fs::path& truss, const fs::path& genome, std::ostream& out);

int exit_code_for(const std::exception& e);

}  // namespace vgt::cli
