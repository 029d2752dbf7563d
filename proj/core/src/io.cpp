#include "vgt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "vgt/error.hpp"

namespace vgt::io {

using nlohmann::json;

namespace {

template <typename F>
auto parsing(const std::string& what, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kParse, what + ": " + e.what());
  }
}

json vec_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec_from_json(const json& j) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::kParse, "expected [x, y, z]");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

}  // namespace

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIo, "write failed for " + path.string());
}

json read_json(const fs::path& path) {
  const std::string text = read_text(path);
  return parsing(path.string(), [&] { return json::parse(text); });
}

void write_json(const fs::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

// ---------------------------------------------------------------- truss

TrussGraph truss_from_json(const json& j) {
  return parsing("truss", [&] {
    std::vector<Vec3> vertices;
    for (const auto& v : j.at("vertices")) vertices.push_back(vec_from_json(v));
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParse, "edge must be [i, j]");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    const int n_channels = j.at("n_channels").get<int>();
    std::vector<std::vector<int>> fixed;
    if (j.contains("fixed_groups")) fixed = j.at("fixed_groups").get<std::vector<std::vector<int>>>();
    const int center = j.value("center_edge", 0);
    TrussGraph graph(std::move(vertices), std::move(edges), n_channels, std::move(fixed), center);

    const json plane = j.value("mirror_plane", json());
    if (plane.is_null()) {
      if (j.contains("channel_mirror") && !j.at("channel_mirror").is_null()) {
        throw Error(ErrorCode::kInvalidChannelMirror, "channel_mirror given without mirror_plane");
      }
      return graph;
    }
    MirrorPlane mp{vec_from_json(plane.at("point")), vec_from_json(plane.at("normal"))};
    std::optional<std::vector<int>> cm;
    if (j.contains("channel_mirror") && !j.at("channel_mirror").is_null()) {
      cm = j.at("channel_mirror").get<std::vector<int>>();
    }
    return build_mirror_maps(graph, mp, 1e-6, std::move(cm));
  });
}

json truss_to_json(const TrussGraph& graph) {
  json j;
  j["vertices"] = json::array();
  for (const Vec3& v : graph.vertices()) j["vertices"].push_back(vec_to_json(v));
  j["edges"] = json::array();
  for (const Edge& e : graph.edges()) j["edges"].push_back({e.a, e.b});
  j["n_channels"] = graph.num_channels();
  if (graph.has_mirror()) {
    const MirrorPlane& p = *graph.mirror_plane();
    j["mirror_plane"] = {{"point", vec_to_json(p.point)}, {"normal", vec_to_json(p.normal)}};
    j["channel_mirror"] = graph.channel_mirror_map();
  } else {
    j["mirror_plane"] = nullptr;
    j["channel_mirror"] = nullptr;
  }
  j["fixed_groups"] = graph.fixed_groups();
  j["center_edge"] = graph.center_edge();
  return j;
}

TrussGraph load_truss(const fs::path& path) { return truss_from_json(read_json(path)); }

void save_truss(const fs::path& path, const TrussGraph& graph) {
  write_json(path, truss_to_json(graph));
}

// --------------------------------------------------------------- genome

Genome genome_from_json(const json& j) {
  return parsing("genome", [&] {
    Genome g;
    g.assignment.channels = j.at("channels").get<std::vector<int>>();
    const json& rows = j.at("control");
    if (!rows.is_array() || rows.empty()) throw Error(ErrorCode::kParse, "control must be a non-empty array");
    const int steps = static_cast<int>(rows.size());
    const int channels = static_cast<int>(rows[0].size());
    if (channels < 1) throw Error(ErrorCode::kParse, "control rows must be non-empty");
    g.control = ControlSequence(steps, channels);
    for (int s = 0; s < steps; ++s) {
      const json& row = rows[static_cast<size_t>(s)];
      if (!row.is_array() || static_cast<int>(row.size()) != channels) {
        throw Error(ErrorCode::kParse, "control rows must all have the same length");
      }
      for (int c = 0; c < channels; ++c) {
        const json& b = row[static_cast<size_t>(c)];
        bool on = false;
        if (b.is_boolean()) {
          on = b.get<bool>();
        } else {
          const int v = b.get<int>();
          if (v != 0 && v != 1) throw Error(ErrorCode::kParse, "control bits must be 0 or 1");
          on = v == 1;
        }
        g.control.set(s, c, on);
      }
    }
    if (j.contains("rating") && !j.at("rating").is_null()) {
      g.rating = j.at("rating").get<std::vector<double>>();
    }
    return g;
  });
}

json genome_to_json(const Genome& genome) {
  json j;
  j["channels"] = genome.assignment.channels;
  j["control"] = json::array();
  for (int s = 0; s < genome.control.steps(); ++s) {
    json row = json::array();
    for (int c = 0; c < genome.control.channels(); ++c) row.push_back(genome.control.at(s, c) ? 1 : 0);
    j["control"].push_back(std::move(row));
  }
  j["rating"] = genome.rating ? json(*genome.rating) : json(nullptr);
  return j;
}

Genome load_genome(const fs::path& path) { return genome_from_json(read_json(path)); }

void save_genome(const fs::path& path, const Genome& genome) {
  write_json(path, genome_to_json(genome));
}

// ----------------------------------------------------------- trajectory

std::string trajectory_to_jsonl(const Trajectory& trajectory) {
  std::string out;
  for (const SimState& s : trajectory.states) {
    json line;
    line["t"] = s.time;
    line["positions"] = json::array();
    for (const Vec3& p : s.positions) line["positions"].push_back(vec_to_json(p));
    line["channel_states"] = json::array();
    for (bool b : s.channel_states) line["channel_states"].push_back(b);
    out += line.dump();
    out += '\n';
  }
  return out;
}

void save_trajectory(const fs::path& path, const Trajectory& trajectory) {
  write_text(path, trajectory_to_jsonl(trajectory));
}

// -------------------------------------------------------------- physics

namespace {

struct RealField {
  const char* name;
  double PhysicsConfig::*member;
};
struct IntField {
  const char* name;
  int PhysicsConfig::*member;
};
struct OptionalField {
  const char* name;
  std::optional<double> PhysicsConfig::*member;
};

constexpr RealField kRealFields[] = {
    {"dt", &PhysicsConfig::dt},
    {"node_mass", &PhysicsConfig::node_mass},
    {"stiffness", &PhysicsConfig::stiffness},
    {"damping", &PhysicsConfig::damping},
    {"gravity", &PhysicsConfig::gravity},
    {"contract_ratio", &PhysicsConfig::contract_ratio},
    {"expand_ratio", &PhysicsConfig::expand_ratio},
    {"actuation_rate", &PhysicsConfig::actuation_rate},
    {"ground_stiffness", &PhysicsConfig::ground_stiffness},
    {"ground_damping", &PhysicsConfig::ground_damping},
    {"friction_coeff", &PhysicsConfig::friction_coeff},
    {"fixed_group_stiffness", &PhysicsConfig::fixed_group_stiffness},
    {"max_speed", &PhysicsConfig::max_speed},
    {"settle_energy", &PhysicsConfig::settle_energy},
};
constexpr IntField kIntFields[] = {
    {"steps_per_action", &PhysicsConfig::steps_per_action},
    {"settle_window", &PhysicsConfig::settle_window},
    {"settle_max_steps", &PhysicsConfig::settle_max_steps},
};
constexpr OptionalField kOptionalFields[] = {
    {"contract_length", &PhysicsConfig::contract_length},
    {"expand_length", &PhysicsConfig::expand_length},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double parse_real(const std::string& key, const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidConfig, "bad number for '" + key + "': " + text);
  }
  return v;
}

int parse_int(const std::string& key, const std::string& text) {
  int v = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorCode::kInvalidConfig, "bad integer for '" + key + "': " + text);
  }
  return v;
}

// Returns false if `key` is not a physics field.
bool assign(PhysicsConfig& cfg, const std::string& key, const std::string& value) {
  for (const auto& f : kRealFields) {
    if (key == f.name) {
      cfg.*f.member = parse_real(key, value);
      return true;
    }
  }
  for (const auto& f : kIntFields) {
    if (key == f.name) {
      cfg.*f.member = parse_int(key, value);
      return true;
    }
  }
  for (const auto& f : kOptionalFields) {
    if (key == f.name) {
      if (value == "none" || value.empty()) {
        (cfg.*f.member).reset();
      } else {
        cfg.*f.member = parse_real(key, value);
      }
      return true;
    }
  }
  return false;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw Error(ErrorCode::kIo, "cannot format number");
  return std::string(buf, ptr);
}

PhysicsConfig physics_from_text(const std::string& text, PhysicsConfig base) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidConfig, "physics line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!assign(base, key, value)) {
      throw Error(ErrorCode::kInvalidConfig, "unknown physics key '" + key + "'");
    }
  }
  base.validate();
  return base;
}

std::string physics_to_text(const PhysicsConfig& config) {
  std::string out;
  for (const auto& f : kRealFields) out += std::string(f.name) + " = " + format_double(config.*f.member) + "\n";
  for (const auto& f : kIntFields) out += std::string(f.name) + " = " + std::to_string(config.*f.member) + "\n";
  for (const auto& f : kOptionalFields) {
    const auto& v = config.*f.member;
    out += std::string(f.name) + " = " + (v ? format_double(*v) : std::string("none")) + "\n";
  }
  return out;
}

PhysicsConfig physics_from_json(const json& j, PhysicsConfig base) {
  if (!j.is_object()) throw Error(ErrorCode::kInvalidConfig, "physics must be an object");
  return parsing("physics", [&] {
    for (const auto& [key, value] : j.items()) {
      bool known = false;
      for (const auto& f : kRealFields) {
        if (key == f.name) base.*f.member = value.get<double>(), known = true;
      }
      for (const auto& f : kIntFields) {
        if (key == f.name) base.*f.member = value.get<int>(), known = true;
      }
      for (const auto& f : kOptionalFields) {
        if (key == f.name) {
          known = true;
          if (value.is_null()) {
            (base.*f.member).reset();
          } else {
            base.*f.member = value.get<double>();
          }
        }
      }
      if (!known) throw Error(ErrorCode::kInvalidConfig, "unknown physics key '" + key + "'");
    }
    base.validate();
    return base;
  });
}

json physics_to_json(const PhysicsConfig& config) {
  json j = json::object();
  for (const auto& f : kRealFields) j[f.name] = config.*f.member;
  for (const auto& f : kIntFields) j[f.name] = config.*f.member;
  for (const auto& f : kOptionalFields) {
    const auto& v = config.*f.member;
    j[f.name] = v ? json(*v) : json(nullptr);
  }
  return j;
}

// ---------------------------------------------------------------- history

std::string history_csv(const std::vector<GenerationRecord>& history,
                        const std::vector<std::string>& objective_names) {
  std::string out = "generation,objective_name,best,mean\n";
  for (const GenerationRecord& rec : history) {
    for (size_t m = 0; m < objective_names.size(); ++m) {
      out += std::to_string(rec.generation) + "," + objective_names[m] + "," +
             format_double(rec.best.at(m)) + "," + format_double(rec.mean.at(m)) + "\n";
    }
  }
  return out;
}

std::string rl_history_csv(const std::vector<UpdateRecord>& history) {
  std::string out = "update,mean_return,policy_loss,value_loss,entropy\n";
  for (const UpdateRecord& r : history) {
    out += std::to_string(r.update) + "," + format_double(r.mean_return) + "," +
           format_double(r.policy_loss) + "," + format_double(r.value_loss) + "," +
           format_double(r.entropy) + "\n";
  }
  return out;
}

// ------------------------------------------------------------- checkpoint

json checkpoint_to_json(const EvolutionState& state, const Rng& rng,
                        const std::vector<GenerationRecord>& history) {
  auto pool = [](const std::vector<Genome>& genomes) {
    json arr = json::array();
    for (const Genome& g : genomes) arr.push_back(genome_to_json(g));
    return arr;
  };
  std::ostringstream engine;
  engine << rng;
  json records = json::array();
  for (const GenerationRecord& r : history) {
    records.push_back({{"generation", r.generation}, {"best", r.best}, {"mean", r.mean}});
  }
  return {{"format", "vgt-checkpoint"},
          {"version", 1},
          {"generation", state.generation},
          {"loop_generation", state.loop_generation},
          {"seed", state.rng_seed},
          {"rng_state", engine.str()},
          {"evolving", pool(state.evolving)},
          {"elite", pool(state.elite)},
          {"history", records}};
}

Checkpoint checkpoint_from_json(const json& j, Rng& rng) {
  return parsing("checkpoint", [&] {
    if (j.at("format").get<std::string>() != "vgt-checkpoint" || j.at("version").get<int>() != 1) {
      throw Error(ErrorCode::kParse, "not a version 1 checkpoint");
    }
    Checkpoint cp;
    EvolutionState& state = cp.state;
    state.generation = j.at("generation").get<int>();
    state.loop_generation = j.at("loop_generation").get<int>();
    state.rng_seed = j.at("seed").get<std::uint64_t>();
    for (const auto& g : j.at("evolving")) state.evolving.push_back(genome_from_json(g));
    for (const auto& g : j.at("elite")) state.elite.push_back(genome_from_json(g));
    for (const auto& r : j.at("history")) {
      cp.history.push_back({r.at("generation").get<int>(), r.at("best").get<std::vector<double>>(),
                            r.at("mean").get<std::vector<double>>()});
    }
    std::istringstream engine(j.at("rng_state").get<std::string>());
    engine >> rng;
    if (!engine) throw Error(ErrorCode::kParse, "bad generator state");
    return cp;
  });
}

}  // namespace vgt::io
