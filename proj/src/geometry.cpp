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

#include "ris3d/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "ris3d/errors.hpp"

namespace ris3d {

namespace {

constexpr double kPiD = kPi<double>;

double wrap_angle(double a) { return std::remainder(a, 2.0 * kPiD); }

// Clamp an azimuth into [lo, hi], choosing the nearer end on the circle.
double clamp_azimuth(const Interval& range, double theta) {
  if (range.contains(theta)) return theta;
  const double to_lo = std::abs(wrap_angle(theta - range.lo));
  const double to_hi = std::abs(wrap_angle(theta - range.hi));
  return to_lo <= to_hi ? range.lo : range.hi;
}

bool azimuth_within(const Interval& range, double theta, double tol) {
  if (range.contains(theta, tol)) return true;
  return std::abs(wrap_angle(theta - range.lo)) <= tol ||
         std::abs(wrap_angle(theta - range.hi)) <= tol;
}

void check_interval(const Interval& r, const char* what) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi) || r.lo > r.hi) {
    throw ValidationError(std::string(what) + " range must be finite and ordered");
  }
}

void check_radius(double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw ValidationError("feasible-set radius must be positive");
  }
}

void check_azimuth(const Interval& r) {
  check_interval(r, "theta");
  if (r.lo < -kPiD || r.hi > kPiD) throw ValidationError("theta range must lie in [-pi, pi]");
}

Vec3 from_cylindrical(double rho, double theta, double z) {
  return Vec3(rho * std::cos(theta), rho * std::sin(theta), z);
}

template <class... Ts> struct Overloaded : Ts... { using Ts::operator()...; };
template <class... Ts> Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

Vec3 to_spherical(const Vec3& q) {
  const double rho = q.norm();
  const double theta = std::atan2(q.y(), q.x());
  const double phi = rho > 0.0 ? std::acos(std::clamp(q.z() / rho, -1.0, 1.0)) : 0.0;
  return Vec3(rho, theta, phi);
}

Vec3 from_spherical(double rho, double theta, double phi) {
  return Vec3(rho * std::sin(phi) * std::cos(theta), rho * std::sin(phi) * std::sin(theta),
              rho * std::cos(phi));
}

void validate(const FeasibleSet& set) {
  std::visit(Overloaded{
                 [](const Ball& b) { check_radius(b.radius); },
                 [](const PlanarBox& p) {
                   if (p.fixed_axis < 0 || p.fixed_axis > 2) {
                     throw ValidationError("planar box fixed axis must be 0, 1 or 2");
                   }
                   if (!std::isfinite(p.fixed_value)) {
                     throw ValidationError("planar box fixed value must be finite");
                   }
                   check_interval(p.ranges[0], "planar box first");
                   check_interval(p.ranges[1], "planar box second");
                 },
                 [](const SphericalCap& s) {
                   check_radius(s.radius);
                   check_azimuth(s.theta);
                   check_interval(s.phi, "phi");
                   if (s.phi.lo < 0.0 || s.phi.hi > kPiD) {
                     throw ValidationError("phi range must lie in [0, pi]");
                   }
                 },
                 [](const CylindricalBand& c) {
                   check_radius(c.radius);
                   check_azimuth(c.theta);
                   check_interval(c.z, "z");
                 },
             },
             set);
}

std::string describe(const FeasibleSet& set) {
  std::ostringstream os;
  os.precision(17);
  std::visit(Overloaded{
                 [&](const Ball& b) { os << "ball radius=" << b.radius; },
                 [&](const PlanarBox& p) {
                   os << "planar axis=" << p.fixed_axis << " value=" << p.fixed_value << " ["
                      << p.ranges[0].lo << "," << p.ranges[0].hi << "] x [" << p.ranges[1].lo
                      << "," << p.ranges[1].hi << "]";
                 },
                 [&](const SphericalCap& s) {
                   os << "sphere radius=" << s.radius << " theta=[" << s.theta.lo << ","
                      << s.theta.hi << "] phi=[" << s.phi.lo << "," << s.phi.hi << "]";
                 },
                 [&](const CylindricalBand& c) {
                   os << "cylinder radius=" << c.radius << " theta=[" << c.theta.lo << ","
                      << c.theta.hi << "] z=[" << c.z.lo << "," << c.z.hi << "]";
                 },
             },
             set);
  return os.str();
}

bool contains(const FeasibleSet& set, const Vec3& q, double tol) {
  if (!q.allFinite()) return false;
  return std::visit(
      Overloaded{
          [&](const Ball& b) { return q.norm() <= b.radius + tol; },
          [&](const PlanarBox& p) {
            int free = 0;
            for (int axis = 0; axis < 3; ++axis) {
              if (axis == p.fixed_axis) {
                if (std::abs(q(axis) - p.fixed_value) > tol) return false;
              } else if (!p.ranges[free++].contains(q(axis), tol)) {
                return false;
              }
            }
            return true;
          },
          [&](const SphericalCap& s) {
            const Vec3 sph = to_spherical(q);
            if (std::abs(sph(0) - s.radius) > tol) return false;
            if (!s.phi.contains(sph(2), tol)) return false;
            // The azimuth is arbitrary on the polar axis.
            if (std::hypot(q.x(), q.y()) == 0.0) return true;
            return azimuth_within(s.theta, sph(1), tol);
          },
          [&](const CylindricalBand& c) {
            const double rho = std::hypot(q.x(), q.y());
            if (std::abs(rho - c.radius) > tol) return false;
            if (!c.z.contains(q.z(), tol)) return false;
            return azimuth_within(c.theta, std::atan2(q.y(), q.x()), tol);
          },
      },
      set);
}

Vec3 project(const FeasibleSet& set, const Vec3& q) {
  if (!std::holds_alternative<PlanarBox>(set) && contains(set, q)) return q;
  return std::visit(Overloaded{
                        [&](const Ball& b) -> Vec3 { return q * (b.radius / q.norm()); },
                        [&](const PlanarBox& p) -> Vec3 {
                          Vec3 r = q;
                          int free = 0;
                          for (int axis = 0; axis < 3; ++axis) {
                            r(axis) = axis == p.fixed_axis ? p.fixed_value
                                                           : p.ranges[free++].clamp(q(axis));
                          }
                          return r;
                        },
                        [&](const SphericalCap& s) -> Vec3 {
                          Vec3 sph = to_spherical(q);
                          if (sph(0) == 0.0) sph = Vec3(0.0, s.theta.mid(), s.phi.mid());
                          if (std::hypot(q.x(), q.y()) == 0.0) sph(1) = s.theta.mid();
                          return from_spherical(s.radius, clamp_azimuth(s.theta, sph(1)),
                                                s.phi.clamp(sph(2)));
                        },
                        [&](const CylindricalBand& c) -> Vec3 {
                          const double rho = std::hypot(q.x(), q.y());
                          const double theta =
                              rho > 0.0 ? std::atan2(q.y(), q.x()) : c.theta.mid();
                          return from_cylindrical(c.radius, clamp_azimuth(c.theta, theta),
                                                  c.z.clamp(q.z()));
                        },
                    },
                    set);
}

Vec3 rescale_gradient(const FeasibleSet& set, const Vec3& q, const Vec3& grad) {
  return std::visit(
      Overloaded{
          [&](const Ball&) -> Vec3 { return grad; },
          [&](const PlanarBox&) -> Vec3 { return grad; },
          [&](const SphericalCap&) -> Vec3 {
            const Vec3 sph = to_spherical(q);
            const double sin_phi = std::sin(sph(2));
            if (sph(0) == 0.0 || std::hypot(q.x(), q.y()) == 0.0 || sin_phi == 0.0) {
              throw PoleError("spherical gradient undefined on the polar axis");
            }
            const double ct = std::cos(sph(1)), st = std::sin(sph(1));
            const double cp = std::cos(sph(2));
            const Vec3 e_rho(sin_phi * ct, sin_phi * st, cp);
            const Vec3 e_theta(-st, ct, 0.0);
            const Vec3 e_phi(cp * ct, cp * st, -sin_phi);
            return Vec3(grad.dot(e_rho), grad.dot(e_theta), grad.dot(e_phi));
          },
          [&](const CylindricalBand&) -> Vec3 {
            const double rho = std::hypot(q.x(), q.y());
            if (rho == 0.0) throw PoleError("cylindrical gradient undefined on the axis");
            const double ct = q.x() / rho, st = q.y() / rho;
            return Vec3(grad.x() * ct + grad.y() * st, -grad.x() * st + grad.y() * ct, grad.z());
          },
      },
      set);
}

Vec3 curvilinear_step(const FeasibleSet& set, const Vec3& q, const Vec3& direction, double alpha) {
  return std::visit(
      Overloaded{
          [&](const Ball&) -> Vec3 { return q + alpha * direction; },
          [&](const PlanarBox&) -> Vec3 { return q + alpha * direction; },
          [&](const SphericalCap&) -> Vec3 {
            const Vec3 sph = to_spherical(q);
            const double sin_phi = std::sin(sph(2));
            if (sph(0) == 0.0 || sin_phi == 0.0) {
              throw PoleError("spherical step undefined on the polar axis");
            }
            return from_spherical(sph(0) + alpha * direction(0),
                                  sph(1) + alpha * direction(1) / (sph(0) * sin_phi),
                                  sph(2) + alpha * direction(2) / sph(0));
          },
          [&](const CylindricalBand&) -> Vec3 {
            const double rho = std::hypot(q.x(), q.y());
            if (rho == 0.0) throw PoleError("cylindrical step undefined on the axis");
            return from_cylindrical(rho + alpha * direction(0),
                                    std::atan2(q.y(), q.x()) + alpha * direction(1) / rho,
                                    q.z() + alpha * direction(2));
          },
      },
      set);
}

// ---------------------------------------------------------------------------

ShapeKind parse_shape_kind(const std::string& name) {
  if (name == "ula") return ShapeKind::Ula;
  if (name == "upa") return ShapeKind::Upa;
  if (name == "cylinder") return ShapeKind::Cylinder;
  if (name == "sphere") return ShapeKind::Sphere;
  throw ValidationError("unknown shape kind '" + name + "' (ula, upa, cylinder, sphere)");
}

std::string to_string(ShapeKind kind) {
  switch (kind) {
    case ShapeKind::Ula: return "ula";
    case ShapeKind::Upa: return "upa";
    case ShapeKind::Cylinder: return "cylinder";
    case ShapeKind::Sphere: return "sphere";
  }
  return "unknown";
}

namespace {

// Grid of `count` cells in rows of `cols`; the last row may be partial.
// Returns (row, offset from the row centre in cells) per element.
std::vector<std::pair<Eigen::Index, double>> grid_cells(Eigen::Index count, Eigen::Index cols) {
  std::vector<std::pair<Eigen::Index, double>> cells;
  cells.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index n = 0; n < count; ++n) {
    const Eigen::Index row = n / cols;
    const Eigen::Index in_row = std::min(cols, count - row * cols);
    cells.emplace_back(row, static_cast<double>(n % cols) - 0.5 * static_cast<double>(in_row - 1));
  }
  return cells;
}

Eigen::Index near_square_columns(Eigen::Index count) {
  auto cols = static_cast<Eigen::Index>(std::ceil(std::sqrt(static_cast<double>(count))));
  while (cols * cols < count) ++cols;
  while (cols > 1 && (cols - 1) * (cols - 1) >= count) --cols;
  return cols;
}

void centre_axis(Mat3X& q, int axis) { q.row(axis).array() -= q.row(axis).mean(); }

}  // namespace

DipoleLayout initial_shape(const ShapeSpec& spec, double lambda) {
  if (spec.count < 1) throw GeometryError("shape needs at least one element");
  if (!(lambda > 0.0)) throw GeometryError("wavelength must be positive");
  if (!(spec.wire_radius > 0.0)) throw GeometryError("wire radius must be positive");
  if (!(spec.spacing > 0.0)) throw GeometryError("element spacing must be positive");
  if (spec.spacing < 2.0 * spec.wire_radius) {
    throw GeometryError("element spacing is below the wire diameter 2a");
  }
  const bool curved = spec.kind == ShapeKind::Cylinder || spec.kind == ShapeKind::Sphere;
  if (curved && !(spec.radius > 0.0)) throw GeometryError("curved shapes need a positive radius");

  const Eigen::Index n = spec.count;
  const double s = spec.spacing;
  Mat3X q = Mat3X::Zero(3, n);

  switch (spec.kind) {
    case ShapeKind::Ula:
      for (Eigen::Index i = 0; i < n; ++i) {
        q(1, i) = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * s;
      }
      break;
    case ShapeKind::Upa: {
      const auto cells = grid_cells(n, near_square_columns(n));
      for (Eigen::Index i = 0; i < n; ++i) {
        q(1, i) = cells[i].second * s;
        q(2, i) = static_cast<double>(cells[i].first) * s;
      }
      centre_axis(q, 2);
      break;
    }
    case ShapeKind::Cylinder: {
      const Eigen::Index cols = near_square_columns(n);
      const double step = s / spec.radius;
      if (static_cast<double>(cols) * step > 2.0 * kPiD) {
        throw GeometryError("cylinder circumference too short for the requested columns");
      }
      const auto cells = grid_cells(n, cols);
      for (Eigen::Index i = 0; i < n; ++i) {
        q.col(i) = from_cylindrical(spec.radius, cells[i].second * step,
                                    static_cast<double>(cells[i].first) * s);
      }
      centre_axis(q, 2);
      break;
    }
    case ShapeKind::Sphere: {
      // Ring i sits at angle psi_i = i s / R from +x and holds
      // floor(2 pi R sin(psi_i) / s) elements; ring 0 is the single apex.
      Eigen::Index placed = 0;
      for (Eigen::Index ring = 0; placed < n; ++ring) {
        const double psi = static_cast<double>(ring) * s / spec.radius;
        if (psi > kPiD) throw GeometryError("sphere too small for the requested elements");
        Eigen::Index capacity = 1;
        if (ring > 0) {
          capacity = std::max<Eigen::Index>(
              1, static_cast<Eigen::Index>(std::floor(2.0 * kPiD * spec.radius * std::sin(psi) / s)));
        }
        const Eigen::Index m = std::min(capacity, n - placed);
        for (Eigen::Index j = 0; j < m; ++j) {
          // Quarter-step offset keeps ring members off common vertical lines.
          const double beta = 2.0 * kPiD * (static_cast<double>(j) + 0.25) / static_cast<double>(m);
          q.col(placed + j) = spec.radius * Vec3(std::cos(psi), std::sin(psi) * std::cos(beta),
                                                 std::sin(psi) * std::sin(beta));
        }
        placed += m;
      }
      break;
    }
  }

  DipoleLayout layout{q, lambda / 4.0, spec.wire_radius};
  layout.validate(lambda);
  return layout;
}

namespace {

Interval scaled(double lo, double hi, double scale) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo) * scale;
  return {mid - half, mid + half};
}

Interval scaled_row(const Eigen::RowVectorXd& v, double scale) {
  return scaled(v.minCoeff(), v.maxCoeff(), scale);
}

Interval clipped(Interval r, double lo, double hi) {
  return {std::max(r.lo, lo), std::min(r.hi, hi)};
}

}  // namespace

FeasibleSet constrained_set(const ShapeSpec& spec, const DipoleLayout& layout, double scale) {
  if (!(scale > 0.0)) throw ValidationError("constraint scale must be positive");
  const Mat3X& q = layout.positions;
  const Eigen::Index n = q.cols();
  switch (spec.kind) {
    case ShapeKind::Ula:
    case ShapeKind::Upa: {
      PlanarBox box;
      box.fixed_axis = 0;
      box.fixed_value = 0.0;
      box.ranges[0] = scaled_row(q.row(1), scale);
      box.ranges[1] = scaled_row(q.row(2), scale);
      return box;
    }
    case ShapeKind::Cylinder: {
      Eigen::RowVectorXd theta(n);
      for (Eigen::Index i = 0; i < n; ++i) theta(i) = std::atan2(q(1, i), q(0, i));
      CylindricalBand band;
      band.radius = spec.radius;
      band.theta = clipped(scaled_row(theta, scale), -kPiD, kPiD);
      band.z = scaled_row(q.row(2), scale);
      return band;
    }
    case ShapeKind::Sphere: {
      Eigen::RowVectorXd theta(n), phi(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        const Vec3 sph = to_spherical(q.col(i));
        theta(i) = sph(1);
        phi(i) = sph(2);
      }
      SphericalCap cap;
      cap.radius = spec.radius;
      cap.theta = clipped(scaled_row(theta, scale), -kPiD, kPiD);
      cap.phi = clipped(scaled_row(phi, scale), 0.0, kPiD);
      return cap;
    }
  }
  throw ValidationError("unknown shape kind");
}

}  // namespace ris3d
