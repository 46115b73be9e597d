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

#include <string>
#include <variant>

#include <Eigen/Dense>

#include "ris3d/impedance.hpp"
#include "ris3d/types.hpp"

namespace ris3d {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  double clamp(double v) const { return v < lo ? lo : (v > hi ? hi : v); }
  bool contains(double v, double tol = 0.0) const { return v >= lo - tol && v <= hi + tol; }
};

/// ||q|| <= radius.
struct Ball {
  double radius = 0.0;
};

/// One Cartesian coordinate fixed, the other two boxed. `ranges` are for the
/// two free axes in increasing axis order (y, z when x is fixed).
struct PlanarBox {
  int fixed_axis = 0;
  double fixed_value = 0.0;
  Interval ranges[2];
};

/// rho = radius, azimuth theta = atan2(y, x), polar angle phi = acos(z / rho).
struct SphericalCap {
  double radius = 0.0;
  Interval theta{-kPi<double>, kPi<double>};
  Interval phi{0.0, kPi<double>};
};

/// hypot(x, y) = radius, azimuth theta = atan2(y, x), height z.
struct CylindricalBand {
  double radius = 0.0;
  Interval theta{-kPi<double>, kPi<double>};
  Interval z;
};

using FeasibleSet = std::variant<Ball, PlanarBox, SphericalCap, CylindricalBand>;

/// Throws ValidationError naming the violated invariant.
void validate(const FeasibleSet& set);

std::string describe(const FeasibleSet& set);

/// Membership with absolute tolerance `tol` (metres for lengths, radians
/// for angles).
bool contains(const FeasibleSet& set, const Vec3& q, double tol = 1e-12);

/// Ball and PlanarBox: Euclidean projection. SphericalCap and
/// CylindricalBand: radial snap to the radius followed by a clamp of the
/// angles and height. Points already in a Ball, SphericalCap or
/// CylindricalBand (to the `contains` tolerance) are returned unchanged; a
/// PlanarBox is always clamped exactly.
Vec3 project(const FeasibleSet& set, const Vec3& q);

/// Components of a Cartesian gradient in the set's local orthonormal frame:
/// (rho, theta, phi) on the sphere, (rho, theta, z) on the cylinder; the
/// Cartesian gradient itself for Ball and PlanarBox. Equivalently
/// [df/drho, df/dtheta / (rho sin phi), df/dphi / rho] for the sphere.
Vec3 rescale_gradient(const FeasibleSet& set, const Vec3& q, const Vec3& grad);

/// Moves q by `alpha` along the rescaled gradient `direction`, stepping in
/// the set's own coordinates (angles advance by arc length / radius). The
/// result is not projected.
Vec3 curvilinear_step(const FeasibleSet& set, const Vec3& q, const Vec3& direction, double alpha);

// ---------------------------------------------------------------------------
// Initial shapes.

enum class ShapeKind { Ula, Upa, Cylinder, Sphere };

ShapeKind parse_shape_kind(const std::string& name);
std::string to_string(ShapeKind kind);

struct ShapeSpec {
  ShapeKind kind = ShapeKind::Upa;
  Eigen::Index count = 100;
  double spacing = 0.0;      ///< metres, centre to centre
  double radius = 0.0;       ///< metres, cylinder and sphere only
  double wire_radius = 0.0;  ///< metres
};

/// Deterministic centred layouts of half-wave dipoles:
///  - ULA: along y, centred at the origin;
///  - UPA: y-z plane, ceil(sqrt(N)) columns, a partial last row centred;
///  - Cylinder: axis z, columns on an arc facing +x, rows spaced in z;
///  - Sphere: latitude rings around +x with arc-length spacing.
/// Throws GeometryError when spacing < 2a or the elements do not fit.
DipoleLayout initial_shape(const ShapeSpec& spec, double lambda);

/// Constrained set for a layout generated from `spec`: every coordinate or
/// angle half-range of the layout scaled by `scale` about its centre.
FeasibleSet constrained_set(const ShapeSpec& spec, const DipoleLayout& layout, double scale = 1.5);

/// Spherical coordinates (rho, theta, phi) of q.
Vec3 to_spherical(const Vec3& q);
Vec3 from_spherical(double rho, double theta, double phi);

}  // namespace ris3d
