// bo4lab <command> --config <file> [--out <dir>] [--seed <int>]
//
// Exit status: 0 all checks passed, 1 some check failed, 2 bad usage or
// config, 3 I/O or numerical failure.

#include <cstdint>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "bo4/cli_io.hpp"
#include "bo4/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudo-spectral simulator and verification harness"};
  std::string command, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  std::string names;
  for (const auto& n : bo4::command_names()) names += (names.empty() ? "" : ", ") + n;
  app.add_option("command", command, "One of: " + names)->required();
  app.add_option("--config", config_path, "Config file (key = value lines)");
  app.add_option("--out", out_dir, "Output directory (overrides 'output')");
  app.add_option("--seed", seed, "RNG seed (overrides 'seed')");
  app.footer(bo4::config_help() +
             "\nBO4LAB_THREADS caps the number of worker threads.");
  CLI11_PARSE(app, argc, argv);

  bo4::RunConfig cfg;
  bo4::Command cmd;
  try {
    cmd = bo4::command_from_string(command);
    if (!config_path.empty()) cfg = bo4::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (!out_dir.empty()) cfg.output = out_dir;
  } catch (const bo4::ConfigError& e) {
    std::cerr << "bo4lab: " << e.what() << "\n";
    return 2;
  } catch (const bo4::IoError& e) {
    std::cerr << "bo4lab: " << e.what() << "\n";
    return 2;
  }

  try {
    const bo4::RunResult result = bo4::run_command(cmd, cfg);
    bo4::write_outputs(result, cfg, cfg.output);
    for (const auto& r : result.reports) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << "  measured=" << r.measured
                << " bound=" << r.bound << "\n";
    }
    return result.all_passed() ? 0 : 1;
  } catch (const bo4::ConfigError& e) {
    std::cerr << "bo4lab: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "bo4lab: " << e.what() << "\n";
    return 3;
  }
}
