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
#include "ris3d/impedance.hpp"

namespace ris3d {

/// Direction sampling in degrees: azimuth atan2(y, x), polar angle from +z.
struct AngleGrid {
  std::vector<double> azimuth_deg;
  std::vector<double> polar_deg;

  /// Azimuths from -180 (inclusive) to 180 (exclusive) and polar angles at
  /// the multiples of `step` strictly between the poles.
  static AngleGrid uniform(double step = 1.0);
};

/// Unit vector of a direction given in degrees.
Vec3 direction(double azimuth_deg, double polar_deg);

/// Azimuth and polar angle (degrees) of the direction of p.
std::pair<double, double> angles_of(const Vec3& p);

/// Far-field power of the element currents i = (Z_SS + Z_RIS)^{-1} z_ST
/// (unit BS source current): |F(polar) sum_n i_n e^{j k r.q_n}|^2 with the
/// half-wave element factor F = cos((pi/2) cos t) / sin t. Throws PoleError
/// on the polar axis.
double radiated_power(const DipoleLayout& layout, const Eigen::VectorXcd& currents,
                      double lambda, double azimuth_deg, double polar_deg);

struct Beampattern {
  AngleGrid grid;
  Eigen::MatrixXd db;  ///< rows: polar angles, columns: azimuths; peak = 0 dB
};

Beampattern beampattern(const DipoleLayout& layout, const ChannelState& state, double lambda,
                        const AngleGrid& grid = AngleGrid::uniform());

/// Directivity (dBi) toward a direction, with the total radiated power
/// integrated over a polar/azimuth grid of `step` degrees (midpoint rule).
double directivity_dbi(const DipoleLayout& layout, const ChannelState& state, double lambda,
                       double azimuth_deg, double polar_deg, double step = 1.0);

/// Row of `pattern` at the polar angle closest to `polar_deg`.
std::vector<double> azimuth_cut(const Beampattern& pattern, double polar_deg);

/// Half-power beamwidth (degrees) around the global peak of a cut, with
/// linear interpolation of the crossings at -10 log10(2) dB. With
/// `periodic` the cut is treated as covering a full circle. Throws
/// NoCrossingError when the pattern never reaches half power on one side
/// of the peak.
double hpbw(const std::vector<double>& angles_deg, const std::vector<double>& db,
            bool periodic = false);

struct SpacingHistogram {
  std::vector<double> edges;   ///< bins + 1 entries
  std::vector<int> counts;
  double threshold = 0.0;      ///< percentile of lambda / d
  std::size_t retained = 0;
};

/// lambda / d_qp over all pairs.
std::vector<double> normalized_spacings(const DipoleLayout& layout, double lambda);

/// Histogram of the lambda / d_qp values at or below the given percentile
/// (linear interpolation between order statistics), in `bins` equal bins.
SpacingHistogram spacing_distribution(const DipoleLayout& layout, double lambda,
                                      double percentile = 90.0, int bins = 20);

}  // namespace ris3d
