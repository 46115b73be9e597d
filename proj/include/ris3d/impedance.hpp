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

#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Dense>

#include "ris3d/errors.hpp"
#include "ris3d/specfun.hpp"
#include "ris3d/types.hpp"

namespace ris3d {

// Thin-wire half-wave dipoles, all oriented along e3 (the z axis). The
// closed-form kernel sums the two travelling-wave directions s0 = +/-1 of the
// sinusoidal current and is exact for h = lambda/4.

/// Pairs whose transverse offset is below this fraction of lambda are treated
/// as co-linear and must go through the quadrature fallback.
inline constexpr double kColinearThreshold = 1e-6;

/// Absolute tolerance (ohms) of the co-linear quadrature.
inline constexpr double kColinearQuadTol = 1e-10;

template <typename T> T transverse_offset(const Vector3<T>& d) { return std::hypot(d.x(), d.y()); }

namespace detail {

template <typename T> void check_dipole(T lambda, T h, T a) {
  if (!(lambda > T(0)) || !(h > T(0)) || !(a > T(0))) {
    throw DomainError("dipole kernel requires lambda > 0, h > 0 and a > 0");
  }
  if (std::abs(h - lambda / T(4)) > T(1e-9) * lambda) {
    throw DomainError("closed-form kernel is specialised to half-wave dipoles (h = lambda/4)");
  }
}

// u = |zeta| + s0 * zeta_z >= 0, without cancellation when zeta is nearly
// (anti)parallel to e3.
template <typename T> T axial_phase_distance(const Vector3<T>& zeta, int s0) {
  const T norm = zeta.norm();
  const T sz = T(s0) * zeta.z();
  if (sz >= T(0)) return norm + sz;
  const T rho2 = zeta.x() * zeta.x() + zeta.y() * zeta.y();
  return rho2 / (norm - sz);
}

template <typename T> std::complex<T> t0(const Vector3<T>& zeta, int s0, T k) {
  return exp_integral_e1(std::complex<T>(T(0), k * axial_phase_distance(zeta, s0)));
}

// Gradient of T0 with respect to zeta:
//   -(zeta/|zeta| + s0 e3) e^{-jku} / u
// The e3 component of (zeta/|zeta| + s0 e3) equals s0 u / |zeta|, which keeps
// the expression well conditioned near the axis.
template <typename T> CVector3<T> t0_gradient(const Vector3<T>& zeta, int s0, T k) {
  const T norm = zeta.norm();
  const T u = axial_phase_distance(zeta, s0);
  const std::complex<T> phase = std::exp(std::complex<T>(T(0), -k * u));
  CVector3<T> g;
  g.x() = -phase * (zeta.x() / (norm * u));
  g.y() = -phase * (zeta.y() / (norm * u));
  g.z() = -phase * (T(s0) / norm);
  return g;
}

template <typename T> std::complex<T> g_sum(const Vector3<T>& d, int s0, T k, T h) {
  const Vector3<T> e3(T(0), T(0), T(2) * h);
  return t0<T>(d - e3, s0, k) + t0<T>(d + e3, s0, k) - T(2) * t0<T>(d, s0, k);
}

template <typename T> CVector3<T> g_sum_gradient(const Vector3<T>& d, int s0, T k, T h) {
  const Vector3<T> e3(T(0), T(0), T(2) * h);
  return t0_gradient<T>(d - e3, s0, k) + t0_gradient<T>(d + e3, s0, k) -
         T(2) * t0_gradient<T>(d, s0, k);
}

template <typename T> void check_not_colinear(const Vector3<T>& d, T lambda) {
  if (transverse_offset(d) < T(kColinearThreshold) * lambda) {
    throw ColinearError("dipoles are co-linear (transverse offset " +
                        std::to_string(static_cast<double>(transverse_offset(d))) +
                        " m); use the quadrature fallback");
  }
}

}  // namespace detail

/// Closed-form mutual impedance Z_qp (ohms) between z-oriented half-wave
/// dipoles centred at q_q and q_p. Symmetric under q_q <-> q_p.
template <typename T>
std::complex<T> mutual_impedance(const Vector3<T>& q_q, const Vector3<T>& q_p, T lambda, T h,
                                 T a) {
  detail::check_dipole(lambda, h, a);
  const Vector3<T> d = q_q - q_p;
  detail::check_not_colinear(d, lambda);
  const T k = wavenumber(lambda);
  std::complex<T> sum(0);
  for (int s0 : {-1, 1}) {
    sum += std::exp(std::complex<T>(T(0), k * T(s0) * d.z())) * detail::g_sum(d, s0, k, h);
  }
  return T(kEta) / (T(8) * kPi<T>)*sum;
}

/// Self impedance: the closed form evaluated with the observation point on
/// the wire surface (transverse offset a).
template <typename T> std::complex<T> self_impedance(T lambda, T h, T a) {
  detail::check_dipole(lambda, h, a);
  return mutual_impedance<T>(Vector3<T>(a, T(0), T(0)), Vector3<T>::Zero(), lambda, h, a);
}

/// Induced-EMF integral for two parallel z-dipoles with sinusoidal currents,
/// j eta/(4 pi) * int_{-h}^{h} sin(k(h-|t|)) [e^{-jkR+}/R+ + e^{-jkR-}/R-] dt,
/// where R+/- run from the point q_q + t e3 to the ends q_p +/- h e3.
/// Used for co-linear pairs, where the closed form hits E1(0).
template <typename T>
std::complex<T> mutual_impedance_colinear(const Vector3<T>& q_q, const Vector3<T>& q_p, T lambda,
                                          T h, T a) {
  detail::check_dipole(lambda, h, a);
  const Vector3<T> d = q_q - q_p;
  const T rho = transverse_offset(d);
  if (rho >= T(kColinearThreshold) * lambda) {
    throw DomainError("mutual_impedance_colinear called for a non co-linear pair");
  }
  const T axial = std::abs(d.z());
  if (axial <= T(1e-12) * lambda) return self_impedance<T>(lambda, h, a);
  const T gap = axial - T(2) * h;
  if (gap < -T(1e-12) * lambda) {
    throw OverlapError("co-linear dipoles overlap (axial gap " +
                       std::to_string(static_cast<double>(gap)) + " m)");
  }
  const T k = wavenumber(lambda);
  auto integrand = [&](T t) {
    const T current = std::sin(k * (h - std::abs(t)));
    const T zp = d.z() + t - h;
    const T zm = d.z() + t + h;
    const T rp = std::sqrt(rho * rho + zp * zp);
    const T rm = std::sqrt(rho * rho + zm * zm);
    const std::complex<T> field = std::exp(std::complex<T>(T(0), -k * rp)) / rp +
                                  std::exp(std::complex<T>(T(0), -k * rm)) / rm;
    return current * field;
  };
  // The current has a kink at t = 0; integrate the halves separately.
  const std::complex<T> value = quad_adaptive(integrand, -h, T(0), T(kColinearQuadTol) / T(2)) +
                                quad_adaptive(integrand, T(0), h, T(kColinearQuadTol) / T(2));
  return std::complex<T>(T(0), T(kEta) / (T(4) * kPi<T>)) * value;
}

/// Impedance between two dipoles, routing co-linear pairs to quadrature.
template <typename T>
std::complex<T> pair_impedance(const Vector3<T>& q_q, const Vector3<T>& q_p, T lambda, T h, T a) {
  if (transverse_offset<T>(q_q - q_p) < T(kColinearThreshold) * lambda) {
    return mutual_impedance_colinear(q_q, q_p, lambda, h, a);
  }
  return mutual_impedance(q_q, q_p, lambda, h, a);
}

/// Gradient of Z_kl with respect to the centre q_k of the first dipole,
/// with delta = q_k - q_l. The gradient with respect to q_l is its negative.
template <typename T>
CVector3<T> impedance_gradient(const Vector3<T>& q_k, const Vector3<T>& q_l, T lambda, T h, T a) {
  detail::check_dipole(lambda, h, a);
  const Vector3<T> d = q_k - q_l;
  detail::check_not_colinear(d, lambda);
  const T k = wavenumber(lambda);
  CVector3<T> grad = CVector3<T>::Zero();
  for (int s0 : {-1, 1}) {
    const std::complex<T> phase = std::exp(std::complex<T>(T(0), k * T(s0) * d.z()));
    CVector3<T> term = detail::g_sum_gradient(d, s0, k, h);
    term.z() += std::complex<T>(T(0), k * T(s0)) * detail::g_sum(d, s0, k, h);
    grad += phase * term;
  }
  return (T(kEta) / (T(8) * kPi<T>)) * grad;
}

// ---------------------------------------------------------------------------
// Layout and batch assembly (double precision).

/// Element positions (3 x N, metres) of identical z-oriented dipoles.
struct DipoleLayout {
  Mat3X positions;
  double half_length = 0.0;
  double wire_radius = 0.0;

  Eigen::Index size() const { return positions.cols(); }
  Vec3 position(Eigen::Index n) const { return positions.col(n); }

  /// Throws ValidationError when an invariant is violated.
  void validate(double lambda) const;
};

/// Z_RT, z_SR, z_ST and Z_SS for one layout (ohms). R = UE, T = BS, S = RIS.
struct ImpedanceSet {
  cdouble z_rt{};
  Eigen::VectorXcd z_sr;
  Eigen::VectorXcd z_st;
  Eigen::MatrixXcd z_ss;
};

/// Everything that changes in an ImpedanceSet when element k moves.
struct ElementCoupling {
  Eigen::VectorXcd z_ss_column;  ///< column k of Z_SS (self term included)
  cdouble z_sr{};
  cdouble z_st{};
};

/// Builds the full impedance set. Kernel errors are rethrown with the
/// offending element indices in the message.
ImpedanceSet assemble(const DipoleLayout& layout, const Vec3& p_bs, const Vec3& p_ue,
                      double lambda);

/// Couplings of element k placed at `position`, all other elements fixed.
ElementCoupling element_coupling(const DipoleLayout& layout, Eigen::Index k,
                                 const Vec3& position, const Vec3& p_bs, const Vec3& p_ue,
                                 double lambda);

/// Writes an ElementCoupling back into `imp` (row and column k of Z_SS).
void apply_coupling(ImpedanceSet& imp, Eigen::Index k, const ElementCoupling& c);

}  // namespace ris3d
