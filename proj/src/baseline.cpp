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

#include "ris3d/baseline.hpp"

#include <cmath>

#include "ris3d/errors.hpp"

namespace ris3d {

Eigen::VectorXd phase_profile(const ImpedanceSet& imp) {
  if (imp.z_sr.size() != imp.z_st.size()) throw ValidationError("z_SR and z_ST sizes disagree");
  Eigen::VectorXd theta(imp.z_sr.size());
  for (Eigen::Index k = 0; k < theta.size(); ++k) theta(k) = -std::arg(imp.z_sr(k) * imp.z_st(k));
  return theta;
}

LoadConversion phases_to_loads(const Eigen::VectorXd& theta, cdouble z0, double r0,
                               const BoxSet& box) {
  box.validate();
  if (!(r0 >= 0.0)) throw ValidationError("loss constant R0 must be non-negative");
  LoadConversion out{RisConfig{Eigen::VectorXd(theta.size()), r0}, 0};
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    if (!std::isfinite(theta(k))) throw DomainError("phase must be finite");
    const double t = std::remainder(theta(k), 2.0 * kPi<double>);
    double b;
    if (std::abs(t) <= kPhasePoleTolerance) {
      b = t >= 0.0 ? box.b_max : box.b_min;
      ++out.clamped;
    } else {
      b = (cdouble(0.0, 1.0) * z0 / std::tan(0.5 * t)).imag();
      if (b < box.b_min || b > box.b_max) {
        b = box.clamp(b);
        ++out.clamped;
      }
    }
    out.config.b(k) = b;
  }
  return out;
}

double load_phase(cdouble z, cdouble z0) { return std::arg((z - z0) / (z + z0)); }

BaselineResult run_baseline(const Link& link, const DipoleLayout& layout, const BoxSet& box) {
  layout.validate(link.lambda);
  const ImpedanceSet imp = assemble(layout, link.p_bs, link.p_ue, link.lambda);
  const cdouble z0 = self_impedance(link.lambda, layout.half_length, layout.wire_radius);
  Eigen::VectorXd theta = phase_profile(imp);
  LoadConversion loads = phases_to_loads(theta, z0, link.r0, box);
  ChannelState channel(imp, loads.config, link.y0);
  const double snr = link.snr_db(channel.channel());
  return {std::move(theta), std::move(loads), ShapeState{layout, std::move(channel)}, snr};
}

}  // namespace ris3d
