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

#include <complex>

#include <Eigen/Dense>

namespace ris3d {

template <typename T> using Vector3 = Eigen::Matrix<T, 3, 1>;
template <typename T> using CVector3 = Eigen::Matrix<std::complex<T>, 3, 1>;
template <typename T> using Matrix3X = Eigen::Matrix<T, 3, Eigen::Dynamic>;

using Vec3 = Vector3<double>;
using CVec3 = CVector3<double>;
using Mat3X = Matrix3X<double>;
using cdouble = std::complex<double>;

/// Free-space wave impedance used by the dipole kernels (ohms).
inline constexpr double kEta = 377.0;

template <typename T> inline constexpr T kPi = T(3.14159265358979323846264338327950288L);

template <typename T> constexpr T wavenumber(T lambda) { return T(2) * kPi<T> / lambda; }

}  // namespace ris3d
