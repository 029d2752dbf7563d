// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//
//   vgt_acceptance [--workdir <dir>]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli/commands.hpp"
#include "cli/experiment.hpp"
#include "support/nsga_oracle.hpp"
#include "support/ppo_checks.hpp"
#include "support/sim_checks.hpp"
#include "support/test_support.hpp"
#include "vgt/environment.hpp"
#include "vgt/evolution.hpp"
#include "vgt/io.hpp"
#include "vgt/nsga2.hpp"
#include "vgt/observation.hpp"
#include "vgt/operators.hpp"

namespace fs = std::filesystem;
using namespace vgt;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Outcome operator_soundness() {
  const auto t0 = Clock::now();
  Rng rng(101);
  std::vector<TrussGraph> trusses;
  for (int i = 0; i < 20; ++i) trusses.push_back(testing::random_mirrored_truss(rng, 8, 40, 2, 4));
  const double setup = seconds_since(t0);

  const auto t1 = Clock::now();
  long valid = 0, total = 0, exhausted = 0;
  for (size_t t = 0; t < trusses.size(); ++t) {
    const TrussGraph& g = trusses[t];
    for (int i = 0; i < 500; ++i) {
      valid += testing::assignment_valid(g, initialize_assignment(g, rng));
      ++total;
    }
    ChannelAssignment a = initialize_assignment(g, rng);
    for (int i = 0; i < 500;) {
      try {
        a = mutate_assignment(g, a, rng);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kNoValidMutation) throw;
        ++exhausted;
        a = initialize_assignment(g, rng);
        continue;
      }
      valid += testing::assignment_valid(g, a);
      ++total;
      ++i;
    }
  }
  const double elapsed = seconds_since(t1);
  std::ostringstream d;
  d << valid << "/" << total << " valid over " << trusses.size() << " trusses, " << exhausted
    << " dead-end mutations restarted, " << fmt("%.2f s", elapsed) << fmt(" (+%.2f s truss generation)", setup);
  return {valid == total && total == 20000 && elapsed < 60.0, d.str()};
}

Outcome nsga_oracle() {
  Rng rng(202);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto r = testing::random_ratings(rng, 32, 2, 4);
    const int keep = 1 + uniform_index(rng, static_cast<int>(r.size()));
    const bool fronts_ok = non_dominated_sort(r) == testing::brute_fronts(r);
    const bool select_ok = select_indices(r, keep) == testing::brute_select(r, keep);
    bool crowding_ok = true;
    for (const auto& front : testing::brute_fronts(r)) {
      std::vector<RatingVector> members;
      for (int i : front) members.push_back(r[static_cast<size_t>(i)]);
      crowding_ok = crowding_ok && crowding_distance(members) == testing::brute_crowding(members);
    }
    mismatches += !(fronts_ok && select_ok && crowding_ok);
  }
  return {mismatches == 0, std::to_string(mismatches) + " mismatches over 1000 populations"};
}

Outcome simulator_physics() {
  const double ballistic = testing::ballistic_error(2000);
  const double beam = testing::single_beam_expand_error();
  Rng rng(303);
  const TrussGraph table = io::load_truss(testing::data_path("table.json"));
  double worst = testing::energy_audit(table, rng).worst_increase;
  for (int i = 0; i < 20; ++i) {
    const TrussGraph g = testing::random_mirrored_truss(rng, 8, 40, 2, 4);
    worst = std::max(worst, testing::energy_audit(g, rng, 5000).worst_increase);
  }
  const double at_rest = testing::energy_audit(table, rng, 20000, 0.0).worst_increase;
  std::ostringstream d;
  d << "ballistic error " << ballistic << ", beam expand error " << fmt("%.3g", beam * 100) << "%"
    << ", worst relative energy increase " << fmt("%.3g", worst) << " (table released from rest "
    << fmt("%.3g", at_rest) << ")";
  return {ballistic == 0.0 && beam < 0.01 && worst <= 1e-9, d.str()};
}

Outcome mirror_equivariance() {
  const TrussGraph table = io::load_truss(testing::data_path("table.json"));
  const Simulator sim(table, PhysicsConfig{});
  const SimState start = sim.settle();
  Rng rng(404);
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    worst = std::max(worst, testing::mirror_equivariance_error(sim, random_genome(table, 20, rng), start));
  }
  return {worst < 1e-6, "max coordinate gap " + fmt("%.3g m", worst) + " over 5 random 20-action genomes"};
}

fs::path small_config(const fs::path& dir, const std::string& name) {
  nlohmann::json j = {
      {"truss", testing::data_path("table.json").string()},
      {"seed", 1234},
      {"output_dir", (dir / name).string()},
      {"objectives",
       {{{"name", "move_forward"}, {"kind", "move_forward"}},
        {{"name", "turn_left"}, {"kind", "turn"}, {"target_angle_deg", 90}},
        {{"name", "lower"}, {"kind", "lower"}}}},
      {"ga", {{"population", 8}, {"exploitation_length", 3}, {"budget", 8}, {"control_steps", 8}}},
  };
  const fs::path p = dir / (name + ".json");
  io::write_json(p, j);
  return p;
}

Outcome determinism(const fs::path& dir) {
  const int many = std::max(4, static_cast<int>(std::thread::hardware_concurrency()));
  std::ostringstream sink;
  std::vector<std::string> histories;
  const std::vector<std::pair<std::string, int>> runs = {{"det_a", 1}, {"det_b", 1}, {"det_c", many}};
  for (const auto& [name, workers] : runs) {
    const auto config = cli::load_experiment(small_config(dir, name), cli::Overrides{std::nullopt, workers, std::nullopt});
    if (cli::run_ga(config, std::nullopt, sink) != cli::kExitOk) return {false, name + " failed"};
    histories.push_back(io::read_text(dir / name / "history.csv"));
  }
  const bool same = histories[0] == histories[1] && histories[0] == histories[2];
  return {same, "history.csv identical across 2 runs with 1 worker and 1 with " + std::to_string(many) +
                    (same ? "" : ": DIFFERS")};
}

// generation -> objective -> best
std::map<int, std::map<std::string, double>> read_best(const fs::path& csv) {
  std::map<int, std::map<std::string, double>> out;
  std::istringstream in(io::read_text(csv));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::string gen, name, best;
    std::getline(row, gen, ',');
    std::getline(row, name, ',');
    std::getline(row, best, ',');
    out[std::stoi(gen)][name] = std::stod(best);
  }
  return out;
}

Outcome desk_scale_ga(const fs::path& dir, cli::ExperimentConfig& config) {
  const unsigned cores = std::thread::hardware_concurrency();
  config = cli::load_experiment(testing::data_path("table_experiment.json"),
                                cli::Overrides{std::nullopt, static_cast<int>(std::max(1u, cores)), dir / "table_ga"});
  std::ostringstream sink;
  const auto t0 = Clock::now();
  if (cli::run_ga(config, std::nullopt, sink) != cli::kExitOk) return {false, "run-ga failed"};
  const double elapsed = seconds_since(t0);

  const auto best = read_best(config.output_dir / "history.csv");
  const auto names = config.objective_names();
  bool monotone = true;
  for (auto it = std::next(best.begin()); it != best.end(); ++it) {
    for (const auto& n : names) monotone = monotone && it->second.at(n) >= std::prev(it)->second.at(n);
  }
  int improved = 0;
  std::ostringstream d;
  for (const auto& n : names) {
    const double first = best.begin()->second.at(n);
    const double last = best.rbegin()->second.at(n);
    improved += last > first;
    d << n << " " << io::format_double(first) << " -> " << io::format_double(last) << "; ";
  }
  d << best.size() << " generations, monotone " << (monotone ? "yes" : "NO") << ", " << improved << "/4 improved, "
    << fmt("%.1f s", elapsed) << " on " << cores << " core(s)";
  const bool generations_ok = static_cast<int>(best.size()) == config.ga.budget + 1;
  return {generations_ok && monotone && improved >= 3 && elapsed < 1800.0, d.str()};
}

Outcome ppo_correctness() {
  Rng rng(707);
  double grad_err = 0.0, ratio_gap = 0.0;
  for (int i = 0; i < 5; ++i) {
    grad_err = std::max(grad_err, testing::ppo_gradient_error(testing::ppo_fixture(rng)));
    ratio_gap = std::max(ratio_gap, testing::ratio_one_gap(testing::ppo_fixture(rng)));
  }
  BanditEnvironment env(3, 5, 4);
  Rng train_rng(10);
  const auto t0 = Clock::now();
  const auto result = train_ppo(env, testing::bandit_config(), train_rng);
  const double elapsed = seconds_since(t0);
  const int first = testing::first_update_above(result.history, 0.95);
  std::ostringstream d;
  d << "max FD relative error " << fmt("%.3g", grad_err) << ", ratio-one gap " << fmt("%.3g", ratio_gap)
    << ", bandit > 0.95 at update " << first << " (" << fmt("%.1f s", elapsed) << ")";
  return {grad_err < 1e-4 && ratio_gap < 1e-10 && first >= 0 && first < 200 && elapsed < 300.0, d.str()};
}

Outcome codec_and_frames() {
  long codec_failures = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int a = 0; a < (1 << n); ++a) {
      const auto bits = encode_action(a, n);
      bool bits_ok = static_cast<int>(bits.size()) == n;
      for (int i = 0; i < n && bits_ok; ++i) bits_ok = bits[static_cast<size_t>(i)] == (((a >> i) & 1) != 0);
      codec_failures += !(bits_ok && decode_action(bits) == a);
    }
  }

  const TrussGraph table = io::load_truss(testing::data_path("table.json"));
  const Simulator sim(table, PhysicsConfig{});
  Rng rng(808);
  const Genome g = random_genome(table, 3, rng);
  SimState s = sim.rollout(g.assignment, sim.settle(), sequence_controller(g.control), 3).states.back();
  for (int k = 0; k < 37; ++k) s = sim.step(g.assignment, s);
  const int nv = table.num_vertices();
  auto relative = [&](const SimState& st) {
    const Observation o = observe(table, st);
    return std::vector<double>(o.begin() + 6 * nv, o.begin() + 12 * nv);
  };
  const auto base = relative(s);
  std::uniform_real_distribution<double> far(-100, 100), near(-3, 3), angle(-std::numbers::pi, std::numbers::pi);
  double worst_translation = 0.0, worst_yaw = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    SimState t = s;
    const Vec3 shift(far(rng), far(rng), 0);
    for (Vec3& p : t.positions) p += shift;
    const auto r = relative(t);
    for (size_t i = 0; i < r.size(); ++i) worst_translation = std::max(worst_translation, std::abs(r[i] - base[i]));
  }
  for (int trial = 0; trial < 1000; ++trial) {
    const Eigen::Matrix3d rot = Eigen::AngleAxisd(angle(rng), Vec3::UnitZ()).toRotationMatrix();
    const Vec3 pivot(near(rng), near(rng), 0);
    SimState t = s;
    for (size_t v = 0; v < t.positions.size(); ++v) {
      t.positions[v] = rot * (s.positions[v] - pivot) + pivot;
      t.velocities[v] = rot * s.velocities[v];
    }
    const auto r = relative(t);
    for (size_t i = 0; i < r.size(); ++i) worst_yaw = std::max(worst_yaw, std::abs(r[i] - base[i]));
  }
  std::ostringstream d;
  d << codec_failures << " codec failures for n <= 8, translation gap " << fmt("%.3g", worst_translation)
    << ", yaw gap " << fmt("%.3g", worst_yaw);
  return {codec_failures == 0 && worst_translation < 1e-9 && worst_yaw < 1e-6, d.str()};
}

Outcome end_to_end(const cli::ExperimentConfig& config) {
  if (config.output_dir.empty()) return {false, "no evolved genomes"};
  const auto names = config.objective_names();
  int checked = 0, mismatches = 0;
  for (const auto& entry : fs::directory_iterator(config.output_dir / "genomes")) {
    const Genome genome = io::load_genome(entry.path());
    std::ostringstream out;
    if (cli::simulate(config, entry.path(), std::nullopt, "", out) != cli::kExitOk) return {false, "simulate failed"};
    std::map<std::string, std::string> printed;
    std::istringstream in(out.str());
    std::string name, value;
    while (in >> name >> value) printed[name] = value;
    for (size_t m = 0; m < names.size(); ++m) {
      const auto it = printed.find(names[m]);
      mismatches += it == printed.end() || std::stod(it->second) != (*genome.rating)[m];
    }
    ++checked;
  }
  return {checked > 0 && mismatches == 0,
          std::to_string(checked) + " evolved genomes replayed, " + std::to_string(mismatches) + " rating mismatches"};
}

}  // namespace

int main(int argc, char** argv) {
  fs::path workdir = fs::temp_directory_path() / "vgt_acceptance";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--workdir" && i + 1 < argc) {
      workdir = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--workdir <dir>]\n", argv[0]);
      return 2;
    }
  }
  fs::remove_all(workdir);
  fs::create_directories(workdir);

  cli::ExperimentConfig table_run;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"constraint operators", operator_soundness},
      {"nsga-ii oracle", nsga_oracle},
      {"simulator physics", simulator_physics},
      {"mirror equivariance", mirror_equivariance},
      {"run-ga determinism", [&] { return determinism(workdir); }},
      {"desk-scale table ga", [&] { return desk_scale_ga(workdir, table_run); }},
      {"ppo correctness", ppo_correctness},
      {"codec and frame invariants", codec_and_frames},
      {"simulate reproduces ratings", [&] { return end_to_end(table_run); }},
  };

  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
