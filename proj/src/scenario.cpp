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

#include "ris3d/scenario.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "ris3d/errors.hpp"

namespace ris3d {

double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

Link Scenario::link() const {
  Link l;
  l.p_bs = p_bs;
  l.p_ue = p_ue;
  l.lambda = lambda;
  l.y0 = y0;
  l.power_w = dbm_to_watts(power_dbm);
  l.noise_w = dbm_to_watts(noise_dbm);
  l.r0 = r0;
  return l;
}

ShapeSpec Scenario::shape_spec(Eigen::Index n) const {
  return ShapeSpec{shape, n, spacing_m(), shape_radius, wire_radius_m()};
}

ShapeSpec Scenario::shape_spec() const { return shape_spec(count); }

SolverSettings Scenario::solver_settings() const {
  SolverSettings s = solver;
  s.alpha_init = alpha_init.value_or(lambda / 10.0);
  s.bisection_tol = bisection_tol.value_or(lambda / 10000.0);
  return s;
}

FeasibleSet Scenario::feasible_set(const DipoleLayout& initial) const {
  if (set_kind == SetKind::Constrained) {
    return constrained_set(shape_spec(initial.size()), initial, constraint_scale);
  }
  double radius = ball_radius;
  if (grow_to_fit) {
    for (Eigen::Index n = 0; n < initial.size(); ++n) {
      radius = std::max(radius, initial.position(n).norm());
    }
  }
  return Ball{radius};
}

void Scenario::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
  };
  require(p_bs.allFinite() && p_ue.allFinite(), "BS and UE positions must be finite");
  require((p_bs - p_ue).norm() > 0.0, "BS and UE positions must differ");
  require(lambda > 0.0 && std::isfinite(lambda), "lambda must be positive");
  require(std::isfinite(power_dbm) && std::isfinite(noise_dbm), "powers must be finite");
  require(std::isfinite(y0.real()) && std::isfinite(y0.imag()) && std::abs(y0) > 0.0,
          "Y0 must be finite and non-zero");
  require(r0 >= 0.0 && std::isfinite(r0), "R0 must be non-negative");
  if (!(box.b_min < box.b_max)) throw ValidationError("b_min must be smaller than b_max");
  require(wire_radius_m() > 0.0 && wire_radius_m() <= lambda / 100.0,
          "wire radius must lie in (0, lambda / 100]");
  require(ball_radius > 0.0, "feasible-set radius must be positive");
  require(constraint_scale > 0.0, "constraint scale must be positive");
  require(count >= 1, "element count must be at least 1");
  require(spacing_m() > 0.0, "element spacing must be positive");
  require(shape_radius > 0.0, "shape radius must be positive");
  solver_settings().validate();
  require(grid_step_deg > 0.0 && grid_step_deg <= 90.0, "grid step must lie in (0, 90] degrees");
  require(cut_polar_deg > 0.0 && cut_polar_deg < 180.0, "cut polar angle must lie in (0, 180)");
  require(percentile >= 0.0 && percentile <= 100.0, "percentile must lie in [0, 100]");
  require(bins >= 1, "bins must be at least 1");
  require(!sweep_counts.empty(), "sweep counts must not be empty");
  for (Eigen::Index n : sweep_counts) require(n >= 1, "sweep counts must be at least 1");
  require(sweep_max_iters >= 1, "sweep max_iters must be at least 1");
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

double to_double(const std::string& s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw std::invalid_argument("expected a number, got '" + s + "'");
  }
  return v;
}

long long to_int(const std::string& s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return v;
}

bool to_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw std::invalid_argument("expected a boolean, got '" + s + "'");
}

Vec3 to_vec3(const std::string& s) {
  const auto parts = split(s);
  if (parts.size() != 3) throw std::invalid_argument("expected three comma-separated numbers");
  return Vec3(to_double(parts[0]), to_double(parts[1]), to_double(parts[2]));
}

cdouble to_complex(const std::string& s) {
  const auto parts = split(s);
  if (parts.size() == 1) return {to_double(parts[0]), 0.0};
  if (parts.size() == 2) return {to_double(parts[0]), to_double(parts[1])};
  throw std::invalid_argument("expected 're' or 're, im'");
}

using Setter = std::function<void(Scenario&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario.p_bs", [](Scenario& s, const std::string& v) { s.p_bs = to_vec3(v); }},
      {"scenario.p_ue", [](Scenario& s, const std::string& v) { s.p_ue = to_vec3(v); }},
      {"scenario.lambda", [](Scenario& s, const std::string& v) { s.lambda = to_double(v); }},
      {"scenario.power_dbm", [](Scenario& s, const std::string& v) { s.power_dbm = to_double(v); }},
      {"scenario.noise_dbm", [](Scenario& s, const std::string& v) { s.noise_dbm = to_double(v); }},
      {"scenario.y0", [](Scenario& s, const std::string& v) { s.y0 = to_complex(v); }},
      {"scenario.r0", [](Scenario& s, const std::string& v) { s.r0 = to_double(v); }},
      {"scenario.b_min", [](Scenario& s, const std::string& v) { s.box.b_min = to_double(v); }},
      {"scenario.b_max", [](Scenario& s, const std::string& v) { s.box.b_max = to_double(v); }},
      {"scenario.wire_radius",
       [](Scenario& s, const std::string& v) { s.wire_radius = to_double(v); }},
      {"feasible_set.kind",
       [](Scenario& s, const std::string& v) {
         if (v == "ball") {
           s.set_kind = SetKind::Ball;
         } else if (v == "constrained") {
           s.set_kind = SetKind::Constrained;
         } else {
           throw std::invalid_argument("expected 'ball' or 'constrained', got '" + v + "'");
         }
       }},
      {"feasible_set.radius", [](Scenario& s, const std::string& v) { s.ball_radius = to_double(v); }},
      {"feasible_set.grow_to_fit",
       [](Scenario& s, const std::string& v) { s.grow_to_fit = to_bool(v); }},
      {"feasible_set.scale",
       [](Scenario& s, const std::string& v) { s.constraint_scale = to_double(v); }},
      {"initial_shape.kind",
       [](Scenario& s, const std::string& v) {
         try {
           s.shape = parse_shape_kind(v);
         } catch (const ValidationError& e) {
           throw std::invalid_argument(e.what());
         }
       }},
      {"initial_shape.count", [](Scenario& s, const std::string& v) { s.count = to_int(v); }},
      {"initial_shape.spacing", [](Scenario& s, const std::string& v) { s.spacing = to_double(v); }},
      {"initial_shape.radius",
       [](Scenario& s, const std::string& v) { s.shape_radius = to_double(v); }},
      {"solver.epsilon", [](Scenario& s, const std::string& v) { s.solver.epsilon = to_double(v); }},
      {"solver.max_iters",
       [](Scenario& s, const std::string& v) { s.solver.max_iters = static_cast<int>(to_int(v)); }},
      {"solver.neumann_cap",
       [](Scenario& s, const std::string& v) { s.solver.neumann_cap = to_double(v); }},
      {"solver.alpha_init", [](Scenario& s, const std::string& v) { s.alpha_init = to_double(v); }},
      {"solver.bisection_tol",
       [](Scenario& s, const std::string& v) { s.bisection_tol = to_double(v); }},
      {"solver.max_halvings",
       [](Scenario& s, const std::string& v) {
         s.solver.max_halvings = static_cast<int>(to_int(v));
       }},
      {"solver.optimize_positions",
       [](Scenario& s, const std::string& v) { s.solver.optimize_positions = to_bool(v); }},
      {"solver.config_max_iters",
       [](Scenario& s, const std::string& v) {
         s.solver.config.max_iters = static_cast<int>(to_int(v));
       }},
      {"solver.config_tol",
       [](Scenario& s, const std::string& v) { s.solver.config.tol = to_double(v); }},
      {"solver.config_step_tol",
       [](Scenario& s, const std::string& v) { s.solver.config.step_tol = to_double(v); }},
      {"solver.config_initial_step",
       [](Scenario& s, const std::string& v) { s.solver.config.initial_step = to_double(v); }},
      {"analysis.grid_step",
       [](Scenario& s, const std::string& v) { s.grid_step_deg = to_double(v); }},
      {"analysis.cut_polar",
       [](Scenario& s, const std::string& v) { s.cut_polar_deg = to_double(v); }},
      {"analysis.percentile", [](Scenario& s, const std::string& v) { s.percentile = to_double(v); }},
      {"analysis.bins",
       [](Scenario& s, const std::string& v) { s.bins = static_cast<int>(to_int(v)); }},
      {"sweep.counts",
       [](Scenario& s, const std::string& v) {
         s.sweep_counts.clear();
         for (const auto& p : split(v)) s.sweep_counts.push_back(to_int(p));
       }},
      {"sweep.max_iters",
       [](Scenario& s, const std::string& v) { s.sweep_max_iters = static_cast<int>(to_int(v)); }},
  };
  return table;
}

bool known_section(const std::string& name) {
  return name == "scenario" || name == "feasible_set" || name == "initial_shape" ||
         name == "solver" || name == "analysis" || name == "sweep";
}

void set_value(Scenario& s, const std::string& section, const std::string& key,
               const std::string& value, int line, int key_col, int value_col) {
  const auto it = setters().find(section + "." + key);
  if (it == setters().end()) {
    throw ParseError("unknown key '" + key + "' in section [" + section + "]", line, key_col);
  }
  try {
    it->second(s, value);
  } catch (const std::invalid_argument& e) {
    throw ParseError("bad value for '" + section + "." + key + "': " + e.what(), line, value_col);
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string content = raw;
    const auto comment = content.find_first_of("#;");
    if (comment != std::string::npos) content.erase(comment);
    const std::string body = trim(content);
    if (body.empty()) continue;
    const int first_col = static_cast<int>(content.find_first_not_of(" \t")) + 1;
    if (body.front() == '[') {
      if (body.back() != ']') throw ParseError("unterminated section header", line, first_col);
      section = trim(body.substr(1, body.size() - 2));
      if (!known_section(section)) {
        throw ParseError("unknown section [" + section + "]", line, first_col);
      }
      continue;
    }
    const auto eq = content.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line, first_col);
    if (section.empty()) throw ParseError("key outside of any section", line, first_col);
    const std::string key = trim(content.substr(0, eq));
    const std::string value = trim(content.substr(eq + 1));
    const auto value_pos = content.find_first_not_of(" \t", eq + 1);
    const int value_col =
        static_cast<int>(value_pos == std::string::npos ? eq + 1 : value_pos) + 1;
    set_value(s, section, key, value, line, first_col, value_col);
  }
  s.validate();
  return s;
}

void apply_override(Scenario& scenario, const std::string& assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ParseError("override must look like section.key=value: '" + assignment + "'", 0, 1);
  }
  const std::string section = trim(assignment.substr(0, dot));
  const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
  if (!known_section(section)) throw ParseError("unknown section [" + section + "]", 0, 1);
  set_value(scenario, section, key, trim(assignment.substr(eq + 1)), 0,
            static_cast<int>(dot) + 2, static_cast<int>(eq) + 2);
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string vec(const Vec3& v) { return num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()); }

}  // namespace

std::string to_ini(const Scenario& s) {
  const SolverSettings solver = s.solver_settings();
  std::ostringstream os;
  os << "[scenario]\n"
     << "p_bs = " << vec(s.p_bs) << "\n"
     << "p_ue = " << vec(s.p_ue) << "\n"
     << "lambda = " << num(s.lambda) << "\n"
     << "power_dbm = " << num(s.power_dbm) << "\n"
     << "noise_dbm = " << num(s.noise_dbm) << "\n"
     << "y0 = " << num(s.y0.real()) << ", " << num(s.y0.imag()) << "\n"
     << "r0 = " << num(s.r0) << "\n"
     << "b_min = " << num(s.box.b_min) << "\n"
     << "b_max = " << num(s.box.b_max) << "\n"
     << "wire_radius = " << num(s.wire_radius_m()) << "\n\n"
     << "[feasible_set]\n"
     << "kind = " << (s.set_kind == SetKind::Ball ? "ball" : "constrained") << "\n"
     << "radius = " << num(s.ball_radius) << "\n"
     << "grow_to_fit = " << (s.grow_to_fit ? "true" : "false") << "\n"
     << "scale = " << num(s.constraint_scale) << "\n\n"
     << "[initial_shape]\n"
     << "kind = " << to_string(s.shape) << "\n"
     << "count = " << s.count << "\n"
     << "spacing = " << num(s.spacing_m()) << "\n"
     << "radius = " << num(s.shape_radius) << "\n\n"
     << "[solver]\n"
     << "epsilon = " << num(solver.epsilon) << "\n"
     << "max_iters = " << solver.max_iters << "\n"
     << "neumann_cap = " << num(solver.neumann_cap) << "\n"
     << "alpha_init = " << num(solver.alpha_init) << "\n"
     << "bisection_tol = " << num(solver.bisection_tol) << "\n"
     << "max_halvings = " << solver.max_halvings << "\n"
     << "optimize_positions = " << (solver.optimize_positions ? "true" : "false") << "\n"
     << "config_max_iters = " << solver.config.max_iters << "\n"
     << "config_tol = " << num(solver.config.tol) << "\n"
     << "config_step_tol = " << num(solver.config.step_tol) << "\n"
     << "config_initial_step = " << num(solver.config.initial_step) << "\n\n"
     << "[analysis]\n"
     << "grid_step = " << num(s.grid_step_deg) << "\n"
     << "cut_polar = " << num(s.cut_polar_deg) << "\n"
     << "percentile = " << num(s.percentile) << "\n"
     << "bins = " << s.bins << "\n\n"
     << "[sweep]\n"
     << "counts = ";
  for (std::size_t i = 0; i < s.sweep_counts.size(); ++i) {
    os << (i ? ", " : "") << s.sweep_counts[i];
  }
  os << "\nmax_iters = " << s.sweep_max_iters << "\n";
  return os.str();
}

}  // namespace ris3d
