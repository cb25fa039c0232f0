#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bo4/cli_io.hpp"
#include "bo4/errors.hpp"
#include "bo4/format.hpp"

namespace bo4 {

namespace {

using Json = nlohmann::ordered_json;

// JSON has no inf/nan; those become strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return fmt_num(x);
}

Json report_to_json(const CheckReport& r) {
  Json j;
  j["name"] = r.name;
  j["passed"] = r.passed;
  j["status"] = r.status;
  j["measured"] = num(r.measured);
  j["bound"] = num(r.bound);
  Json notes = Json::object();
  for (const auto& [k, v] : r.notes) notes[k] = v;
  j["notes"] = notes;
  Json rows = Json::array();
  for (const auto& row : r.details.rows) {
    Json jr = Json::array();
    for (double x : row) jr.push_back(num(x));
    rows.push_back(jr);
  }
  j["details"] = {{"columns", r.details.columns}, {"rows", rows}};
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) throw IoError("write failed: " + path.string());
}

std::string snapshot_bytes(const Trajectory& traj) {
  std::string out;
  for (const Field& f : traj.snapshots) {
    for (double x : f.values()) {
      auto bits = std::bit_cast<std::uint64_t>(x);
      for (int b = 0; b < 8; ++b) out.push_back(static_cast<char>((bits >> (8 * b)) & 0xff));
    }
  }
  return out;
}

}  // namespace

std::string git_describe() {
#ifdef BO4_GIT_DESCRIBE
  return BO4_GIT_DESCRIBE;
#else
  return "unknown";
#endif
}

std::string trajectory_csv(const Trajectory& traj) {
  std::string out = "t,mass,l2,hs_s,E_s,E_l2\n";
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const SampleDiagnostics& d = traj.diagnostics.at(i);
    const double hs = d.hs.empty() ? 0.0 : d.hs.front();
    out += fmt_num(traj.times[i]);
    for (double x : {d.mass, d.l2, hs, d.energy_hs, d.energy_l2}) {
      out += ',';
      out += fmt_num(x);
    }
    out += '\n';
  }
  return out;
}

std::string manifest_json(const Trajectory& traj, const RunConfig& cfg, Command cmd) {
  Json j;
  j["format"] = "float64 little-endian, row-major [count][n], grid values at x_j = 2*pi*j/n";
  j["n"] = traj.snapshots.empty() ? cfg.n : traj.snapshots.front().size();
  j["count"] = traj.snapshots.size();
  Json times = Json::array();
  for (double t : traj.times) times.push_back(num(t));
  j["times"] = times;
  j["seed"] = cfg.seed;
  j["git_describe"] = git_describe();
  j["command"] = to_string(cmd);
  j["config"] = config_text(cfg);
  return j.dump(2) + "\n";
}

std::string report_json(const RunResult& result, const RunConfig& cfg) {
  Json j;
  j["command"] = to_string(result.command);
  j["all_passed"] = result.all_passed();
  j["seed"] = cfg.seed;
  j["git_describe"] = git_describe();
  Json reports = Json::array();
  for (const auto& r : result.reports) reports.push_back(report_to_json(r));
  j["reports"] = reports;
  j["config"] = config_text(cfg);
  return j.dump(2) + "\n";
}

void write_outputs(const RunResult& result, const RunConfig& cfg, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  if (result.trajectory) {
    write_file(dir / "trajectory.csv", trajectory_csv(*result.trajectory));
    write_file(dir / "snapshots.bin", snapshot_bytes(*result.trajectory));
    write_file(dir / "snapshots.json", manifest_json(*result.trajectory, cfg, result.command));
  }
  write_file(dir / "report.json", report_json(result, cfg));
}

}  // namespace bo4
