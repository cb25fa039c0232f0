#pragma once

// Configuration files, command dispatch and output files of the bo4lab tool.
//
// A config is a sequence of "key = value" lines; '#' starts a comment and
// lists are comma separated.  Every key, its default and its constraint
// are listed by config_help().

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "bo4/diagnostics.hpp"
#include "bo4/evolve.hpp"

namespace bo4 {

enum class Command {
  Evolve,
  Identities,
  Commutators,
  Symbols,
  Gn,
  Mollifier,
  Loss,
  TwoSolution,
  BonaSmith,
  Conserve
};

std::string to_string(Command c);
Command command_from_string(const std::string& name);  // ConfigError
const std::vector<std::string>& command_names();

struct RunConfig {
  // grid, equation, solver
  int n = 256;
  std::string preset = "integrable";
  CoefficientSet coeffs = CoefficientSet::integrable();
  double s = 4.0;
  double s0 = 3.6;
  double s_prime = 4.0;
  std::vector<double> epsilon{1e-3};
  int time_direction = 1;
  double dt = 0.0;  // 0: automatic
  double t_end = 1.0;
  int sample_every = 1;
  std::string scheme = "etdrk4";
  double cfl = 0.5;
  double Cs = 0.0;  // 0: choose_big_constant on the initial data
  std::uint64_t seed = 0;
  std::string output = "bo4lab_out";

  // initial data
  std::string data = "random";  // random | cos
  double amplitude = 0.1;       // ‖u0‖_{H^s}
  double decay = 5.0;
  int max_mode = 8;

  // checks and experiments
  int samples = 4;
  int n_coarse = 64;
  int n_fine = 256;
  std::vector<int> kinds{1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<double> s_list{0.0, 2.0, 4.0};
  std::vector<std::string> inequalities{"taylor2", "leibniz"};
  int box = 256;
  int fit_radius = 64;
  std::vector<int> l_list{0, 1, 2};
  std::vector<double> p_list{2.0, 4.0, INFINITY};
  std::vector<double> alpha{0.5, 1.0, 2.0};
  std::vector<int> k0{4, 8, 16, 32};
  double seed_amplitude = 0.01;
  double loss_epsilon = 0.0;
  double perturbation = 1e-3;
  std::vector<double> eps_list{0x1p-8, 0x1p-12, 0x1p-16, 0x1p-20, 0x1p-24, 0x1p-28, 0x1p-32};
  double delta = 0.05;

  bool operator==(const RunConfig&) const = default;
};

// Parses and validates; errors are ConfigError naming the offending key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

// Every key with its value; parse_config(config_text(c)) == c.
std::string config_text(const RunConfig& c);

// Key, default and constraint, one per line.
std::string config_help();

struct RunResult {
  Command command = Command::Evolve;
  std::vector<CheckReport> reports;
  // evolve / conserve: the (first) trajectory and its diagnostics setup
  std::optional<Trajectory> trajectory;
  double trajectory_s = 0.0;

  bool all_passed() const;
};

// Worker cap from BO4LAB_THREADS (>= 1; unset or invalid: hardware threads).
int worker_count();

RunResult run_command(Command cmd, const RunConfig& cfg);

// trajectory.csv (when a trajectory exists), snapshots.bin with
// snapshots.json, and report.json.  IoError names the failing path.
void write_outputs(const RunResult& result, const RunConfig& cfg, const std::filesystem::path& dir);

std::string trajectory_csv(const Trajectory& traj);
std::string report_json(const RunResult& result, const RunConfig& cfg);
std::string manifest_json(const Trajectory& traj, const RunConfig& cfg, Command cmd);

// Version string recorded in manifests.
std::string git_describe();

}  // namespace bo4
