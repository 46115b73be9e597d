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

#include "ris3d/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "ris3d/errors.hpp"

namespace ris3d {

namespace {

constexpr double kDeg = kPi<double> / 180.0;

}  // namespace

AngleGrid AngleGrid::uniform(double step) {
  if (!(step > 0.0)) throw DomainError("grid step must be positive");
  AngleGrid g;
  const auto n_az = static_cast<int>(std::llround(360.0 / step));
  for (int i = 0; i < n_az; ++i) g.azimuth_deg.push_back(-180.0 + i * step);
  for (int i = 1; i * step < 180.0 - 1e-9; ++i) g.polar_deg.push_back(i * step);
  return g;
}

Vec3 direction(double azimuth_deg, double polar_deg) {
  const double az = azimuth_deg * kDeg, pol = polar_deg * kDeg;
  return Vec3(std::sin(pol) * std::cos(az), std::sin(pol) * std::sin(az), std::cos(pol));
}

std::pair<double, double> angles_of(const Vec3& p) {
  const double r = p.norm();
  if (!(r > 0.0)) throw DomainError("direction of the zero vector");
  return {std::atan2(p.y(), p.x()) / kDeg, std::acos(std::clamp(p.z() / r, -1.0, 1.0)) / kDeg};
}

double radiated_power(const DipoleLayout& layout, const Eigen::VectorXcd& currents,
                      double lambda, double azimuth_deg, double polar_deg) {
  const double pol = polar_deg * kDeg;
  const double s = std::sin(pol);
  if (std::abs(s) < 1e-12) throw PoleError("element factor undefined on the dipole axis");
  const double element = std::cos(0.5 * kPi<double> * std::cos(pol)) / s;
  const Vec3 r = direction(azimuth_deg, polar_deg);
  const double k = wavenumber(lambda);
  cdouble af{};
  for (Eigen::Index n = 0; n < layout.size(); ++n) {
    af += currents(n) * std::polar(1.0, k * r.dot(layout.position(n)));
  }
  return std::norm(element * af);
}

Beampattern beampattern(const DipoleLayout& layout, const ChannelState& state, double lambda,
                        const AngleGrid& grid) {
  if (grid.azimuth_deg.empty() || grid.polar_deg.empty()) throw DomainError("empty angle grid");
  const auto rows = static_cast<Eigen::Index>(grid.polar_deg.size());
  const auto cols = static_cast<Eigen::Index>(grid.azimuth_deg.size());
  Eigen::MatrixXd power(rows, cols);
  const Eigen::VectorXcd& currents = state.g_st();
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      power(i, j) = radiated_power(layout, currents, lambda, grid.azimuth_deg[j], grid.polar_deg[i]);
    }
  }
  const double peak = power.maxCoeff();
  if (!(peak > 0.0)) throw DomainError("pattern has no radiated power");
  Beampattern out{grid, Eigen::MatrixXd(rows, cols)};
  out.db = (power / peak).array().log10() * 10.0;
  return out;
}

double directivity_dbi(const DipoleLayout& layout, const ChannelState& state, double lambda,
                       double azimuth_deg, double polar_deg, double step) {
  if (!(step > 0.0)) throw DomainError("integration step must be positive");
  const Eigen::VectorXcd& currents = state.g_st();
  const auto n_pol = static_cast<int>(std::llround(180.0 / step));
  const auto n_az = static_cast<int>(std::llround(360.0 / step));
  const double d = step * kDeg;
  double total = 0.0;
  for (int i = 0; i < n_pol; ++i) {
    const double pol = (i + 0.5) * step;
    double ring = 0.0;
    for (int j = 0; j < n_az; ++j) {
      ring += radiated_power(layout, currents, lambda, -180.0 + (j + 0.5) * step, pol);
    }
    total += ring * std::sin(pol * kDeg);
  }
  total *= d * d;
  const double u = radiated_power(layout, currents, lambda, azimuth_deg, polar_deg);
  return 10.0 * std::log10(4.0 * kPi<double> * u / total);
}

std::vector<double> azimuth_cut(const Beampattern& pattern, double polar_deg) {
  const auto& pol = pattern.grid.polar_deg;
  if (pol.empty()) throw DomainError("empty angle grid");
  std::size_t best = 0;
  for (std::size_t i = 1; i < pol.size(); ++i) {
    if (std::abs(pol[i] - polar_deg) < std::abs(pol[best] - polar_deg)) best = i;
  }
  const Eigen::VectorXd row = pattern.db.row(static_cast<Eigen::Index>(best));
  return {row.data(), row.data() + row.size()};
}

double hpbw(const std::vector<double>& angles_deg, const std::vector<double>& db, bool periodic) {
  const std::size_t n = db.size();
  if (n < 2 || angles_deg.size() != n) throw DomainError("cut needs matching angles and values");
  const auto peak_it = std::max_element(db.begin(), db.end());
  const auto peak = static_cast<std::ptrdiff_t>(peak_it - db.begin());
  const double level = *peak_it - 10.0 * std::log10(2.0);
  const auto sn = static_cast<std::ptrdiff_t>(n);
  const double period = periodic ? (angles_deg.back() - angles_deg.front()) *
                                       static_cast<double>(n) / static_cast<double>(n - 1)
                                 : 0.0;

  // Angle of sample i (unwrapped) and value, allowing indices outside [0, n).
  auto at = [&](std::ptrdiff_t i) {
    const std::ptrdiff_t wraps = i >= 0 ? i / sn : -((-i + sn - 1) / sn);
    const std::ptrdiff_t j = i - wraps * sn;
    return std::pair<double, double>(angles_deg[j] + static_cast<double>(wraps) * period, db[j]);
  };

  auto crossing = [&](int dir) {
    for (std::ptrdiff_t s = 1; s < sn; ++s) {
      const std::ptrdiff_t i = peak + dir * s;
      if (!periodic && (i < 0 || i >= sn)) break;
      const auto [a1, v1] = at(i);
      if (v1 <= level) {
        const auto [a0, v0] = at(i - dir);
        return a0 + (level - v0) * (a1 - a0) / (v1 - v0);
      }
    }
    throw NoCrossingError("pattern never drops to half power on one side of its peak");
  };
  const double right = crossing(+1);
  const double left = crossing(-1);
  const double width = right - left;
  if (periodic && width > period) {
    throw NoCrossingError("half-power crossings overlap around the circle");
  }
  return width;
}

std::vector<double> normalized_spacings(const DipoleLayout& layout, double lambda) {
  std::vector<double> v;
  const Eigen::Index n = layout.size();
  v.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p + 1; q < n; ++q) {
      const double d = (layout.position(p) - layout.position(q)).norm();
      if (!(d > 0.0)) throw GeometryError("coincident elements have no spacing");
      v.push_back(lambda / d);
    }
  }
  return v;
}

SpacingHistogram spacing_distribution(const DipoleLayout& layout, double lambda,
                                      double percentile, int bins) {
  if (layout.size() < 2) throw DomainError("spacing distribution needs at least two elements");
  if (!(percentile >= 0.0 && percentile <= 100.0)) throw DomainError("percentile outside [0, 100]");
  if (bins < 1) throw DomainError("histogram needs at least one bin");
  std::vector<double> v = normalized_spacings(layout, lambda);
  std::sort(v.begin(), v.end());

  const double pos = percentile / 100.0 * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  SpacingHistogram h;
  h.threshold = v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
  v.erase(std::upper_bound(v.begin(), v.end(), h.threshold), v.end());
  h.retained = v.size();

  double first = v.front(), last = v.back();
  if (last == first) {
    first -= 0.5;
    last += 0.5;
  }
  const double width = (last - first) / bins;
  for (int b = 0; b <= bins; ++b) h.edges.push_back(first + b * width);
  h.edges.back() = last;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  for (double x : v) {
    auto b = static_cast<int>((x - first) / width);
    h.counts[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1;
  }
  return h;
}

}  // namespace ris3d
