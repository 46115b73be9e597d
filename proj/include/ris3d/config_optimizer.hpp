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

namespace ris3d {

/// Projected gradient ascent with Armijo backtracking on |H|^2 over the box.
struct ConfigSettings {
  int max_iters = 1000;
  double tol = 1e-10;              ///< relative objective gain that ends the ascent
  double step_tol = 1e-6;          ///< ohms; largest reactance change that ends the ascent
  double initial_step = 10.0;      ///< ohms, along the inf-normalised gradient
  double shrink = 0.5;
  double sufficient_increase = 1e-4;

  void validate() const;
};

struct ConfigResult {
  ChannelState state;
  std::vector<double> objective;  ///< |H|^2 per accepted iterate, starting point first
  int iterations = 0;
  bool converged = false;
};

/// d|H|^2 / db_n for every element, from the cached products of `state`:
/// dH/db_n = j Y0 g_SR,n g_ST,n.
Eigen::VectorXd config_gradient(const ChannelState& state);

/// Maximises |H|^2 over b in the box starting from state.config().b (clamped
/// into the box). Never returns a worse point than the start.
ConfigResult optimize_config(const ChannelState& state, const BoxSet& box,
                             const ConfigSettings& settings = {});

}  // namespace ris3d
