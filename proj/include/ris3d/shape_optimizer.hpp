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

#include <vector>

#include <Eigen/Dense>

#include "ris3d/channel.hpp"
#include "ris3d/config_optimizer.hpp"
#include "ris3d/geometry.hpp"
#include "ris3d/impedance.hpp"

namespace ris3d {

/// Fixed link parameters: BS (transmitter) and UE (receiver) dipoles,
/// wavelength, Y0, powers in watts and the load resistance R0.
struct Link {
  Vec3 p_bs = Vec3(1.3, 0.0, 0.0);
  Vec3 p_ue = Vec3(0.98, 0.56, -0.65);
  double lambda = 0.01;
  cdouble y0{1.0, 0.0};
  double power_w = 1e-2;
  double noise_w = 1e-11;
  double r0 = 0.2;

  double snr_db(cdouble h) const { return ris3d::snr_db(h, power_w, noise_w); }
};

struct SolverSettings {
  double epsilon = 1e-6;         ///< relative linear-SNR improvement that ends the loop
  int max_iters = 2000;          ///< outer iterations
  double neumann_cap = 0.1;      ///< bound on ||G Delta||
  double alpha_init = 1e-3;      ///< metres
  double bisection_tol = 1e-6;   ///< metres
  int max_halvings = 30;
  bool optimize_positions = true;
  ConfigSettings config;

  void validate() const;
};

/// A layout together with its exact channel.
struct ShapeState {
  DipoleLayout layout;
  ChannelState channel;
};

/// Builds the exact channel for `layout` under configuration `b`.
ShapeState make_state(const Link& link, DipoleLayout layout, const Eigen::VectorXd& b);

/// Real gradient of |H|^2 with respect to the position of element k at
/// zero displacement. Throws ColinearError naming the pair when element k is
/// co-linear with another dipole.
Vec3 position_gradient(const ShapeState& state, Eigen::Index k, const Link& link);

struct ElementUpdate {
  ShapeState state;
  bool accepted = false;
  double step = 0.0;          ///< accepted alpha in metres
  double displacement = 0.0;  ///< ||q_new - q_old||
  int neumann_rejections = 0;
  int trials = 0;
};

/// One projected-gradient move of element k. The step is the largest alpha
/// in (0, alpha_init] found by halving then bisection for which the
/// perturbation stays within the Neumann cap, the exact gain strictly
/// increases and the moved element is feasible. The returned state is
/// recomputed from scratch.
ElementUpdate update_element(const ShapeState& state, Eigen::Index k, const FeasibleSet& set,
                             const Link& link, const SolverSettings& settings);

struct TraceRow {
  int iter = 0;
  double snr_db = 0.0;
  int config_iters = 0;
  int accepted = 0;
  int rejected = 0;
  int neumann_rejections = 0;
  int colinear_incidents = 0;
  int colinear_skips = 0;
  double max_displacement = 0.0;
  double mean_step = 0.0;
  std::vector<double> steps;          ///< per element, 0 when rejected
  std::vector<double> displacements;  ///< per element
};

struct OptimizerTrace {
  std::vector<TraceRow> rows;  ///< row 0 is the starting point
  double wall_seconds = 0.0;
};

struct JointResult {
  ShapeState state;
  OptimizerTrace trace;
  double initial_snr_db = 0.0;      ///< projected initial layout, b = 0
  double config_only_snr_db = 0.0;  ///< initial layout after the first configuration step
  bool converged = false;
};

/// Alternates configuration optimisation and a sweep of element updates
/// until the relative SNR improvement drops to epsilon or max_iters outer
/// iterations have run. The initial layout is projected into `set`.
JointResult run_joint_optimization(const Link& link, const DipoleLayout& initial,
                                   const FeasibleSet& set, const BoxSet& box,
                                   const SolverSettings& settings);

}  // namespace ris3d
