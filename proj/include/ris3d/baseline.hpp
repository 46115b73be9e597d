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

#include <Eigen/Dense>

#include "ris3d/channel.hpp"
#include "ris3d/shape_optimizer.hpp"

namespace ris3d {

/// Co-phasing profile theta_k = -arg(z_SR,k z_ST,k) of the cascaded
/// BS -> element -> UE paths (radians).
Eigen::VectorXd phase_profile(const ImpedanceSet& imp);

/// Phases within this distance of the pole at theta = 0 are clamped.
inline constexpr double kPhasePoleTolerance = 1e-9;

struct LoadConversion {
  RisConfig config;
  int clamped = 0;  ///< entries moved onto a box edge
};

/// Inverts e^{j theta} = (Z - Z0) / (Z + Z0), which gives
/// Z = j Z0 cot(theta / 2), and keeps b = Im(Z) with the real part replaced
/// by R0. Values outside the box, and phases at the pole theta = 0 (mod
/// 2 pi), are clamped to the nearer box edge.
LoadConversion phases_to_loads(const Eigen::VectorXd& theta, cdouble z0, double r0,
                               const BoxSet& box);

/// Reflection phase arg((Z - Z0) / (Z + Z0)) of a load Z.
double load_phase(cdouble z, cdouble z0);

struct BaselineResult {
  Eigen::VectorXd theta;
  LoadConversion loads;
  ShapeState state;
  double snr_db = 0.0;
};

/// Phase-profile configuration on a fixed layout, with Z0 the element self
/// impedance.
BaselineResult run_baseline(const Link& link, const DipoleLayout& layout, const BoxSet& box);

}  // namespace ris3d
