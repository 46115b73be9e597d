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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <type_traits>
#include <vector>

#include "ris3d/errors.hpp"

namespace ris3d {

/// Euler-Mascheroni constant to 20 significant digits.
template <typename T> inline constexpr T kEulerGamma = T(0.57721566490153286061L);

namespace detail {

template <typename T> std::complex<T> e1_series(const std::complex<T>& z) {
  // E1(z) = -gamma - ln z - sum_{k>=1} (-z)^k / (k k!)
  const T eps = std::numeric_limits<T>::epsilon();
  std::complex<T> term(1);
  std::complex<T> sum(0);
  for (int k = 1; k < 200; ++k) {
    term *= -z / T(k);
    const std::complex<T> add = term / T(k);
    sum += add;
    if (std::abs(add) <= eps * std::abs(sum)) {
      return -kEulerGamma<T> - std::log(z) - sum;
    }
  }
  throw ConvergenceError("E1 power series did not converge");
}

template <typename T> std::complex<T> e1_continued_fraction(const std::complex<T>& z) {
  // Modified Lentz evaluation of
  //   E1(z) = e^{-z} / (z + 1 - 1^2 / (z + 3 - 2^2 / (z + 5 - ...)))
  const T eps = std::numeric_limits<T>::epsilon();
  const T tiny = std::numeric_limits<T>::min() / eps;
  std::complex<T> b = z + T(1);
  std::complex<T> c = T(1) / tiny;
  std::complex<T> d = T(1) / b;
  std::complex<T> h = d;
  for (int i = 1; i < 100000; ++i) {
    const T an = -T(i) * T(i);
    b += T(2);
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = T(1) / d;
    const std::complex<T> del = c * d;
    h *= del;
    if (std::abs(del - T(1)) <= eps) return h * std::exp(-z);
  }
  throw ConvergenceError("E1 continued fraction did not converge");
}

}  // namespace detail

/// Exponential integral E1(z) on the principal branch.
///
/// Power series for |z| <= 4, continued fraction beyond. The cut lies on the
/// negative real axis; arguments produced by the dipole kernels are of the
/// form j*k*u with u >= 0, well away from it.
template <typename T> std::complex<T> exp_integral_e1(const std::complex<T>& z) {
  if (z == std::complex<T>(0)) {
    throw DomainError("E1(0) diverges (co-linear or coincident dipole geometry)");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError("E1 argument is not finite");
  }
  if (std::abs(z) <= T(4)) return detail::e1_series(z);
  return detail::e1_continued_fraction(z);
}

namespace detail {

// 15-point Kronrod rule with embedded 7-point Gauss rule (QUADPACK qk15).
template <typename T> struct Kronrod15 {
  static constexpr std::array<T, 8> nodes{
      T(0.991455371120812639206854697526329L), T(0.949107912342758524526189684047851L),
      T(0.864864423359769072789712788640926L), T(0.741531185599394439863864773280788L),
      T(0.586087235467691130294144845693013L), T(0.405845151377397166906606412076961L),
      T(0.207784955007898467600689403773245L), T(0)};
  static constexpr std::array<T, 8> kronrod_weights{
      T(0.022935322010529224963732008058970L), T(0.063092092629978553290700663189204L),
      T(0.104790010322250183839876322541518L), T(0.140653259715525918745189590510238L),
      T(0.169004726639267902826583426598550L), T(0.190350578064785409913256402421014L),
      T(0.204432940075298892414161999234649L), T(0.209482141084727828012999174891714L)};
  // Gauss weights attached to nodes[1], nodes[3], nodes[5], nodes[7].
  static constexpr std::array<T, 4> gauss_weights{
      T(0.129484966168869693270611432679082L), T(0.279705391489276667901467771423780L),
      T(0.381830050505118944950369775488975L), T(0.417959183673469387755102040816327L)};
};

template <typename R, typename T> struct QuadSegment {
  T a, b;
  R value;
  T error;
  bool operator<(const QuadSegment& o) const { return error < o.error; }
};

template <typename T, typename F>
auto gauss_kronrod_15(F& f, T a, T b) {
  using R = std::invoke_result_t<F&, T>;
  using Rule = Kronrod15<T>;
  const T center = (a + b) / T(2);
  const T half = (b - a) / T(2);
  R kronrod = f(center) * Rule::kronrod_weights[7];
  R gauss = f(center) * Rule::gauss_weights[3];
  for (int i = 0; i < 7; ++i) {
    const T dx = half * Rule::nodes[i];
    const R pair = f(center - dx) + f(center + dx);
    kronrod += pair * Rule::kronrod_weights[i];
    if (i % 2 == 1) gauss += pair * Rule::gauss_weights[i / 2];
  }
  kronrod *= half;
  gauss *= half;
  return QuadSegment<R, T>{a, b, kronrod, static_cast<T>(std::abs(kronrod - gauss))};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of `f` over [a, b].
///
/// The segment with the largest error estimate is bisected until the summed
/// estimate falls to `tol` (absolute). Works for real- or complex-valued `f`.
/// Throws ConvergenceError when `max_segments` is exhausted first.
template <typename T, typename F>
auto quad_adaptive(F&& f, T a, T b, T tol, int max_segments = 4000) {
  using R = std::invoke_result_t<F&, T>;
  if (!(a < b)) throw DomainError("quad_adaptive requires a < b");
  if (!(tol > T(0))) throw DomainError("quad_adaptive requires tol > 0");

  std::priority_queue<detail::QuadSegment<R, T>> heap;
  heap.push(detail::gauss_kronrod_15(f, a, b));
  R total = heap.top().value;
  T error = heap.top().error;
  int segments = 1;
  while (error > tol) {
    if (segments >= max_segments) {
      throw ConvergenceError("quad_adaptive: error estimate " + std::to_string(error) +
                             " above tolerance after " + std::to_string(segments) +
                             " segments");
    }
    const auto worst = heap.top();
    heap.pop();
    const T mid = (worst.a + worst.b) / T(2);
    if (!(worst.a < mid && mid < worst.b)) {
      throw ConvergenceError("quad_adaptive: segment width reached machine resolution");
    }
    auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
    if (error <= tol) {
      // Re-sum from scratch; the running totals accumulate cancellation error.
      auto copy = heap;
      total = R(0);
      error = T(0);
      while (!copy.empty()) {
        total += copy.top().value;
        error += copy.top().error;
        copy.pop();
      }
    }
  }
  return total;
}

}  // namespace ris3d
