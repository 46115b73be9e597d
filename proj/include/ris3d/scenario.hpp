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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ris3d/channel.hpp"
#include "ris3d/geometry.hpp"
#include "ris3d/shape_optimizer.hpp"

namespace ris3d {

double dbm_to_watts(double dbm);

enum class SetKind { Ball, Constrained };

struct Scenario {
  // [scenario]
  Vec3 p_bs = Vec3(1.3, 0.0, 0.0);
  Vec3 p_ue = Vec3(0.98, 0.56, -0.65);
  double lambda = 0.01;
  double power_dbm = 10.0;
  double noise_dbm = -80.0;
  cdouble y0{1.0, 0.0};
  double r0 = 0.2;
  BoxSet box;
  std::optional<double> wire_radius;  ///< default lambda / 500

  // [feasible_set]
  SetKind set_kind = SetKind::Ball;
  double ball_radius = 0.05;
  bool grow_to_fit = true;  ///< enlarge the ball to hold the initial shape
  double constraint_scale = 1.5;

  // [initial_shape]
  ShapeKind shape = ShapeKind::Upa;
  Eigen::Index count = 100;
  std::optional<double> spacing;  ///< default lambda / 16 (ULA) or lambda / 2
  double shape_radius = 0.1;

  // [solver]
  SolverSettings solver;
  std::optional<double> alpha_init;     ///< default lambda / 10
  std::optional<double> bisection_tol;  ///< default lambda / 10000

  // [analysis]
  double grid_step_deg = 1.0;
  double cut_polar_deg = 120.0;
  double percentile = 90.0;
  int bins = 20;

  // [sweep]
  std::vector<Eigen::Index> sweep_counts{8, 16, 32, 64};
  int sweep_max_iters = 3;

  double wire_radius_m() const { return wire_radius.value_or(lambda / 500.0); }
  double spacing_m() const {
    return spacing.value_or(shape == ShapeKind::Ula ? lambda / 16.0 : lambda / 2.0);
  }
  Link link() const;
  ShapeSpec shape_spec() const;
  ShapeSpec shape_spec(Eigen::Index n) const;
  SolverSettings solver_settings() const;

  /// Feasible set for a layout built from shape_spec().
  FeasibleSet feasible_set(const DipoleLayout& initial) const;

  /// Throws ValidationError naming the violated invariant.
  void validate() const;
};

/// Parses the INI-style grammar: `[section]` headers, `key = value` lines,
/// `#` or `;` comments. Vectors are comma separated. Missing keys keep
/// their defaults. Throws ParseError (with line and column) for unknown
/// sections, unknown keys and malformed values; the result is validated.
Scenario parse_scenario(const std::string& text);

/// Applies one `section.key=value` override.
void apply_override(Scenario& scenario, const std::string& assignment);

/// Canonical INI text of the fully resolved scenario.
std::string to_ini(const Scenario& scenario);

}  // namespace ris3d
