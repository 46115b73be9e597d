// SPDX-License-Identifier: Apache-2.0
//
// ris3d - shape and configuration optimization for conformal reconfigurable
// intelligent surfaces under a mutual-coupling impedance model
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "ris3d/cli.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "ris3d/analysis.hpp"
#include "ris3d/baseline.hpp"
#include "ris3d/errors.hpp"
#include "ris3d/io.hpp"
#include "ris3d/scenario.hpp"
#include "ris3d/shape_optimizer.hpp"

namespace ris3d {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Options {
  std::string config;
  std::string out = "ris3d-out";
  std::vector<std::string> overrides;
  int threads = 0;
  std::string from;
};

struct RunRecord {
  std::vector<std::string> outputs;
  json summary = json::object();
};

Scenario load_scenario(const Options& opt) {
  std::string text;
  if (!opt.config.empty()) {
    std::ifstream in(opt.config, std::ios::binary);
    if (!in) throw ConfigNotFoundError("config file not found: " + opt.config);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  Scenario s = parse_scenario(text);
  for (const auto& o : opt.overrides) apply_override(s, o);
  s.validate();
  return s;
}

json scenario_json(const Scenario& s) {
  json j = json::object();
  std::istringstream in(to_ini(s));
  std::string line, section;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[') {
      section = line.substr(1, line.size() - 2);
      j[section] = json::object();
      continue;
    }
    const auto eq = line.find(" = ");
    j[section][line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

void emit(RunRecord& rec, const fs::path& dir, const std::string& name, const CsvTable& t) {
  write_csv(dir / name, t);
  rec.outputs.push_back(name);
}

CsvTable summary_table(const json& summary) {
  CsvTable t{{"key", "value"}, {}};
  for (const auto& [k, v] : summary.items()) {
    std::string value;
    if (v.is_number_float()) {
      value = format_number(v.get<double>());
    } else if (v.is_number_integer()) {
      value = format_number(v.get<long long>());
    } else if (v.is_boolean()) {
      value = v.get<bool>() ? "true" : "false";
    } else if (v.is_null()) {
      value = "nan";
    } else {
      value = v.get<std::string>();
    }
    t.add({k, value});
  }
  return t;
}

DipoleLayout layout_from(const Scenario& s, Mat3X positions) {
  DipoleLayout layout{std::move(positions), s.lambda / 4.0, s.wire_radius_m()};
  layout.validate(s.lambda);
  return layout;
}

// Layout and configuration for the analysis subcommands: a previous run's
// artefacts when --from is given, otherwise the initial shape with the
// phase-profile configuration.
std::pair<DipoleLayout, RisConfig> analysed_design(const Scenario& s, const Options& opt) {
  if (!opt.from.empty()) {
    const fs::path dir(opt.from);
    DipoleLayout layout = layout_from(s, read_layout(dir / "layout.csv"));
    RisConfig cfg = read_reactances(dir / "reactances.csv");
    if (cfg.b.size() != layout.size()) {
      throw ValidationError("layout and reactance files disagree on the element count");
    }
    return {std::move(layout), std::move(cfg)};
  }
  DipoleLayout layout = initial_shape(s.shape_spec(), s.lambda);
  BaselineResult base = run_baseline(s.link(), layout, s.box);
  return {std::move(layout), base.loads.config};
}

void run_optimize(const Scenario& s, const fs::path& dir, RunRecord& rec) {
  const Link link = s.link();
  const DipoleLayout initial = initial_shape(s.shape_spec(), s.lambda);
  const FeasibleSet set = s.feasible_set(initial);
  DipoleLayout projected = initial;
  for (Eigen::Index n = 0; n < projected.size(); ++n) {
    projected.positions.col(n) = project(set, initial.position(n));
  }
  const JointResult r = run_joint_optimization(link, initial, set, s.box, s.solver_settings());
  emit(rec, dir, "initial_layout.csv", layout_table(projected));
  emit(rec, dir, "layout.csv", layout_table(r.state.layout));
  emit(rec, dir, "reactances.csv", reactance_table(r.state.channel.config()));
  emit(rec, dir, "trace.csv", trace_table(r.trace));
  emit(rec, dir, "element_steps.csv", element_steps_table(r.trace));
  rec.summary["initial_snr_db"] = r.initial_snr_db;
  rec.summary["config_only_snr_db"] = r.config_only_snr_db;
  rec.summary["final_snr_db"] = r.trace.rows.back().snr_db;
  rec.summary["outer_iterations"] = static_cast<long long>(r.trace.rows.size() - 1);
  rec.summary["converged"] = r.converged;
  emit(rec, dir, "summary.csv", summary_table(rec.summary));
  rec.summary["feasible_set"] = describe(set);
  rec.summary["wall_seconds"] = r.trace.wall_seconds;
}

void run_baseline_cmd(const Scenario& s, const fs::path& dir, RunRecord& rec) {
  const DipoleLayout layout = initial_shape(s.shape_spec(), s.lambda);
  const BaselineResult b = run_baseline(s.link(), layout, s.box);
  CsvTable phases{{"index", "theta_rad", "b_ohm"}, {}};
  for (Eigen::Index n = 0; n < b.theta.size(); ++n) {
    phases.add({format_number(static_cast<long long>(n)), format_number(b.theta(n)),
                format_number(b.loads.config.b(n))});
  }
  emit(rec, dir, "layout.csv", layout_table(layout));
  emit(rec, dir, "reactances.csv", reactance_table(b.loads.config));
  emit(rec, dir, "phases.csv", phases);
  rec.summary["snr_db"] = b.snr_db;
  rec.summary["clamped"] = static_cast<long long>(b.loads.clamped);
  emit(rec, dir, "summary.csv", summary_table(rec.summary));
}

void run_beampattern(const Scenario& s, const Options& opt, const fs::path& dir, RunRecord& rec) {
  const auto [layout, cfg] = analysed_design(s, opt);
  const ChannelState state(assemble(layout, s.p_bs, s.p_ue, s.lambda), cfg, s.y0);
  const Beampattern p = beampattern(layout, state, s.lambda, AngleGrid::uniform(s.grid_step_deg));
  const std::vector<double> cut = azimuth_cut(p, s.cut_polar_deg);
  CsvTable cut_table{{"azimuth_deg", "db"}, {}};
  for (std::size_t j = 0; j < cut.size(); ++j) {
    cut_table.add({format_number(p.grid.azimuth_deg[j]), format_number(cut[j])});
  }
  emit(rec, dir, "beampattern.csv", beampattern_table(p));
  emit(rec, dir, "beampattern_cut.csv", cut_table);

  const auto [ue_az, ue_pol] = angles_of(s.p_ue);
  rec.summary["ue_azimuth_deg"] = ue_az;
  rec.summary["ue_polar_deg"] = ue_pol;
  rec.summary["directivity_ue_dbi"] =
      directivity_dbi(layout, state, s.lambda, ue_az, ue_pol, s.grid_step_deg);
  try {
    rec.summary["hpbw_cut_deg"] = hpbw(p.grid.azimuth_deg, cut, true);
  } catch (const NoCrossingError&) {
    rec.summary["hpbw_cut_deg"] = nullptr;
  }
  emit(rec, dir, "summary.csv", summary_table(rec.summary));
}

void run_spacing(const Scenario& s, const Options& opt, const fs::path& dir, RunRecord& rec) {
  DipoleLayout layout = analysed_design(s, opt).first;
  const SpacingHistogram h = spacing_distribution(layout, s.lambda, s.percentile, s.bins);
  emit(rec, dir, "spacing.csv", spacing_table(h));
  rec.summary["threshold"] = h.threshold;
  rec.summary["retained"] = static_cast<long long>(h.retained);
  if (!opt.from.empty() && fs::exists(fs::path(opt.from) / "initial_layout.csv")) {
    const DipoleLayout initial =
        layout_from(s, read_layout(fs::path(opt.from) / "initial_layout.csv"));
    const SpacingHistogram hi = spacing_distribution(initial, s.lambda, s.percentile, s.bins);
    emit(rec, dir, "spacing_initial.csv", spacing_table(hi));
    rec.summary["initial_threshold"] = hi.threshold;
  }
  emit(rec, dir, "summary.csv", summary_table(rec.summary));
}

void run_sweep(const Scenario& s, const fs::path& dir, RunRecord& rec) {
  CsvTable t{{"count", "outer_iterations", "wall_seconds", "initial_snr_db", "final_snr_db"}, {}};
  for (Eigen::Index n : s.sweep_counts) {
    const DipoleLayout initial = initial_shape(s.shape_spec(n), s.lambda);
    SolverSettings settings = s.solver_settings();
    settings.max_iters = s.sweep_max_iters;
    const JointResult r =
        run_joint_optimization(s.link(), initial, s.feasible_set(initial), s.box, settings);
    t.add({format_number(static_cast<long long>(n)),
           format_number(static_cast<long long>(r.trace.rows.size() - 1)),
           format_number(r.trace.wall_seconds), format_number(r.initial_snr_db),
           format_number(r.trace.rows.back().snr_db)});
  }
  emit(rec, dir, "sweep.csv", t);
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const fs::path& dir, const std::string& command, const Scenario& s,
                    const RunRecord& rec) {
  json m;
  m["tool"] = "ris3d";
  m["version"] = kVersion;
  m["command"] = command;
  m["created_utc"] = utc_timestamp();
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                       std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["threads"] = omp_get_max_threads();
  m["determinism"] =
      "CSV outputs depend only on the resolved scenario; created_utc and wall_seconds are the "
      "only run-dependent fields and appear only in this manifest";
  m["scenario"] = scenario_json(s);
  m["outputs"] = rec.outputs;
  m["summary"] = rec.summary;
  std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + (dir / "manifest.json").string());
  out << m.dump(2) << '\n';
}

void report_error(const fs::path& dir, const std::string& kind, const std::string& message,
                  std::ostream& err) {
  const std::string line = json{{"kind", kind}, {"message", message}}.dump();
  err << line << '\n';
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) return;
  std::ofstream out(dir / "error.jsonl", std::ios::binary | std::ios::trunc);
  if (out) out << line << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shape and configuration optimisation of conformal RIS dipole arrays"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "Scenario file (INI); defaults apply when omitted");
    sub->add_option("--out", opt.out, "Output directory")->capture_default_str();
    sub->add_option("--set", opt.overrides, "Override, section.key=value (repeatable)");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
  };
  CLI::App* optimize = app.add_subcommand("optimize", "Joint shape and configuration optimisation");
  CLI::App* baseline = app.add_subcommand("baseline", "Phase-profile configuration on the initial shape");
  CLI::App* pattern = app.add_subcommand("beampattern", "Radiated power over azimuth and elevation");
  CLI::App* spacing = app.add_subcommand("spacing", "Histogram of normalised element spacings");
  CLI::App* sweep = app.add_subcommand("sweep", "Timing of optimise over several element counts");
  for (CLI::App* sub : {optimize, baseline, pattern, spacing, sweep}) common(sub);
  for (CLI::App* sub : {pattern, spacing}) {
    sub->add_option("--from", opt.from, "Directory with layout.csv and reactances.csv");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  const fs::path dir(opt.out);
  try {
    if (opt.threads > 0) omp_set_num_threads(opt.threads);
    const Scenario s = load_scenario(opt);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    fs::remove(dir / "error.jsonl", ec);

    RunRecord rec;
    std::string command;
    if (optimize->parsed()) {
      command = "optimize";
      run_optimize(s, dir, rec);
    } else if (baseline->parsed()) {
      command = "baseline";
      run_baseline_cmd(s, dir, rec);
    } else if (pattern->parsed()) {
      command = "beampattern";
      run_beampattern(s, opt, dir, rec);
    } else if (spacing->parsed()) {
      command = "spacing";
      run_spacing(s, opt, dir, rec);
    } else {
      command = "sweep";
      run_sweep(s, dir, rec);
    }
    write_manifest(dir, command, s, rec);
    out << command << ": wrote " << rec.outputs.size() << " files to " << dir.string() << '\n';
    return 0;
  } catch (const Error& e) {
    report_error(dir, e.kind(), e.what(), err);
  } catch (const std::exception& e) {
    report_error(dir, "internal", e.what(), err);
  }
  return 1;
}

}  // namespace ris3d
