#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

#include "vgt/evolution.hpp"
#include "vgt/genome.hpp"
#include "vgt/ppo.hpp"
#include "vgt/sim.hpp"
#include "vgt/truss_graph.hpp"

namespace vgt::io {

namespace fs = std::filesystem;

// Whole-file helpers. Missing or unwritable files throw kIo; malformed JSON
// throws kParse.
std::string read_text(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
nlohmann::json read_json(const fs::path& path);
void write_json(const fs::path& path, const nlohmann::json& j);

// Truss file. A non-null mirror_plane builds the mirror maps on load;
// channel_mirror defaults to pairing 2k with 2k+1.
TrussGraph truss_from_json(const nlohmann::json& j);
nlohmann::json truss_to_json(const TrussGraph& graph);
TrussGraph load_truss(const fs::path& path);
void save_truss(const fs::path& path, const TrussGraph& graph);

// {"channels": [...], "control": [[0|1, ...] per step], "rating": [...] | null}
Genome genome_from_json(const nlohmann::json& j);
nlohmann::json genome_to_json(const Genome& genome);
Genome load_genome(const fs::path& path);
void save_genome(const fs::path& path, const Genome& genome);

// One JSON object per line: {"t", "positions", "channel_states"}.
std::string trajectory_to_jsonl(const Trajectory& trajectory);
void save_trajectory(const fs::path& path, const Trajectory& trajectory);

// key = value lines, '#' starts a comment. Keys are PhysicsConfig field
// names; unknown keys throw kInvalidConfig. Values not given keep `base`.
PhysicsConfig physics_from_text(const std::string& text, PhysicsConfig base = {});
std::string physics_to_text(const PhysicsConfig& config);
PhysicsConfig physics_from_json(const nlohmann::json& j, PhysicsConfig base = {});
nlohmann::json physics_to_json(const PhysicsConfig& config);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

// generation,objective_name,best,mean
std::string history_csv(const std::vector<GenerationRecord>& history,
                        const std::vector<std::string>& objective_names);

// update,mean_return,policy_loss,value_loss,entropy
std::string rl_history_csv(const std::vector<UpdateRecord>& history);

// Evolution state plus the engine state and history needed to resume
// bit-for-bit.
struct Checkpoint {
  EvolutionState state;
  std::vector<GenerationRecord> history;
};
nlohmann::json checkpoint_to_json(const EvolutionState& state, const Rng& rng,
                                  const std::vector<GenerationRecord>& history);
Checkpoint checkpoint_from_json(const nlohmann::json& j, Rng& rng);

}  // namespace vgt::io
