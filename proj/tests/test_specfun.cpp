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

#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "ris3d/errors.hpp"
#include "ris3d/specfun.hpp"

namespace {

using ris3d::cdouble;

// Frozen from an independent 30-digit evaluation of the defining integral.
constexpr double kE1AtOne = 0.21938393439552027;
const cdouble kE1At2PiJ(0.022560661746346068, -0.15264475066226817);

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

TEST(ExpIntegralE1, RealArgumentMatchesDefiningIntegral) {
  const cdouble v = ris3d::exp_integral_e1(cdouble(1.0, 0.0));
  EXPECT_LE(rel(v, kE1AtOne), 1e-13);
  EXPECT_LE(rel(v, oracle::e1_integral(1.0)), 1e-12);
}

TEST(ExpIntegralE1, ImaginaryArgumentMatchesCiSi) {
  const double x = 2.0 * oracle::kPi;
  const cdouble from_ci_si(-oracle::ci(x), oracle::si(x) - 0.5 * oracle::kPi);
  const cdouble v = ris3d::exp_integral_e1(cdouble(0.0, x));
  EXPECT_LE(rel(v, from_ci_si), 1e-12);
  EXPECT_LE(rel(v, kE1At2PiJ), 1e-13);
}

TEST(ExpIntegralE1, ZeroIsDomainError) {
  EXPECT_THROW(ris3d::exp_integral_e1(cdouble(0.0, 0.0)), ris3d::DomainError);
  EXPECT_THROW(ris3d::exp_integral_e1(cdouble(NAN, 1.0)), ris3d::DomainError);
}

TEST(ExpIntegralE1, AgreesWithQuadratureAcrossBranchSplit) {
  // Both sides of |z| = 4 and the arguments the dipole kernels produce.
  const cdouble points[] = {{0.0, 1e-4}, {0.0, 0.0125}, {0.0, 3.99}, {0.0, 4.01}, {0.0, 10.0},
                            {0.0, 800.0}, {3.0, 3.0},   {2.9, 2.9},  {0.01, 5.0}, {20.0, 0.5},
                            {1e-6, 40.0}, {0.5, 0.0},   {7.0, 0.0}};
  for (const cdouble z : points) {
    EXPECT_LE(rel(ris3d::exp_integral_e1(z), oracle::e1_integral(z)), 1e-12) << "z = " << z;
  }
}

TEST(ExpIntegralE1, ConjugateSymmetry) {
  for (double re : {0.1, 1.0, 3.5, 6.0}) {
    for (double im : {0.2, 2.0, 4.5, 30.0}) {
      const cdouble z(re, im);
      const cdouble a = ris3d::exp_integral_e1(std::conj(z));
      const cdouble b = std::conj(ris3d::exp_integral_e1(z));
      EXPECT_LE(rel(a, b), 1e-12) << z;
    }
  }
}

TEST(ExpIntegralE1, SeriesResidualShrinksWithTerms) {
  for (const cdouble z : {cdouble(0.5, 0.5), cdouble(0.0, 2.0), cdouble(1.5, -1.0)}) {
    const cdouble e1 = ris3d::exp_integral_e1(z);
    double previous = INFINITY;
    cdouble partial{};
    cdouble term = 1.0;
    for (int k = 1; k <= 40; ++k) {
      term *= z / static_cast<double>(k);
      partial += (k % 2 ? 1.0 : -1.0) * term / static_cast<double>(k);
      const double residual = std::abs(e1 + std::log(z) + oracle::kGamma - partial);
      if (k % 5 == 0) {
        EXPECT_LE(residual, previous) << "z = " << z << " K = " << k;
        previous = residual;
      }
    }
    EXPECT_LE(previous, 1e-13);
  }
}

TEST(QuadAdaptive, Trivial) {
  EXPECT_NEAR(ris3d::quad_adaptive([](double) { return 1.0; }, 0.0, 1.0, 1e-12), 1.0, 1e-14);
  EXPECT_NEAR(ris3d::quad_adaptive([](double t) { return std::sin(t); }, 0.0, oracle::kPi, 1e-12),
              2.0, 1e-12);
}

TEST(QuadAdaptive, ExponentialIntegralTail) {
  const double v =
      ris3d::quad_adaptive([](double t) { return std::exp(-t) / t; }, 1.0, 50.0, 1e-13);
  EXPECT_NEAR(v, kE1AtOne, 1e-13);
}

TEST(QuadAdaptive, ComplexIntegrand) {
  const cdouble v = ris3d::quad_adaptive(
      [](double t) { return std::exp(cdouble(0.0, t)); }, 0.0, oracle::kPi / 2.0, 1e-13);
  EXPECT_LE(std::abs(v - cdouble(1.0, 1.0)), 1e-13);
}

TEST(QuadAdaptive, TighterToleranceNeverWorse) {
  auto f = [](double t) { return std::exp(std::sin(3.0 * t)) * std::cos(t); };
  const double exact = oracle::composite([&](double t) { return cdouble(f(t)); },
                                         {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, 0.05)
                           .real();
  double previous = INFINITY;
  for (double tol : {1e-3, 1e-5, 1e-7, 1e-9, 1e-11}) {
    const double err = std::abs(ris3d::quad_adaptive(f, 0.0, 3.0, tol) - exact);
    EXPECT_LE(err, tol);
    EXPECT_LE(err, previous * (1.0 + 1e-12) + 1e-15);
    previous = err;
  }
}

TEST(QuadAdaptive, RejectsBadArguments) {
  auto one = [](double) { return 1.0; };
  EXPECT_THROW(ris3d::quad_adaptive(one, 1.0, 0.0, 1e-9), ris3d::DomainError);
  EXPECT_THROW(ris3d::quad_adaptive(one, 0.0, 1.0, 0.0), ris3d::DomainError);
}

TEST(QuadAdaptive, NonIntegrableSingularityExhaustsBudget) {
  auto f = [](double t) { return 1.0 / t; };
  EXPECT_THROW(ris3d::quad_adaptive(f, 0.0, 1.0, 1e-12, 200), ris3d::ConvergenceError);
}

}  // namespace
