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
#include <random>

#include <gtest/gtest.h>

#include "ris3d/baseline.hpp"
#include "ris3d/errors.hpp"
#include "ris3d/geometry.hpp"

namespace {

using ris3d::cdouble;
using ris3d::Vec3;
using Eigen::VectorXd;

const ris3d::Link kLink{};
const ris3d::BoxSet kBox{};
constexpr double kPi = ris3d::kPi<double>;

double wrap(double a) { return std::remainder(a, 2 * kPi); }

ris3d::ImpedanceSet cascade(const Eigen::VectorXcd& z_sr, const Eigen::VectorXcd& z_st) {
  ris3d::ImpedanceSet imp;
  imp.z_sr = z_sr;
  imp.z_st = z_st;
  return imp;
}

TEST(PhaseProfile, RealPositiveCascadeGivesZeroPhases) {
  const Eigen::VectorXcd v = Eigen::VectorXcd::Constant(5, cdouble(2.0, 0.0));
  EXPECT_EQ(ris3d::phase_profile(cascade(v, v)), VectorXd::Zero(5));
}

TEST(PhaseProfile, SingleElementCascadePhase) {
  const Eigen::VectorXcd sr = Eigen::VectorXcd::Constant(1, std::polar(3.0, kPi / 12));
  const Eigen::VectorXcd st = Eigen::VectorXcd::Constant(1, std::polar(0.5, kPi / 4));
  EXPECT_NEAR(ris3d::phase_profile(cascade(sr, st))(0), -kPi / 3, 1e-15);
}

TEST(PhaseProfile, UpaFollowsSteeringPhase) {
  const auto layout = ris3d::initial_shape(
      {ris3d::ShapeKind::Upa, 16, kLink.lambda / 2, 0.0, kLink.lambda / 500}, kLink.lambda);
  const auto imp = ris3d::assemble(layout, kLink.p_bs, kLink.p_ue, kLink.lambda);
  const VectorXd theta = ris3d::phase_profile(imp);
  const double k = ris3d::wavenumber(kLink.lambda);
  auto path = [&](Eigen::Index n) {
    return (layout.position(n) - kLink.p_ue).norm() + (layout.position(n) - kLink.p_bs).norm();
  };
  const Vec3 steer = -(kLink.p_ue.normalized() + kLink.p_bs.normalized());
  const double span = layout.positions.colwise().norm().maxCoeff();
  const double curvature = k * span * span / kLink.p_ue.norm();
  for (Eigen::Index n = 1; n < 16; ++n) {
    const double rel = wrap(theta(n) - theta(0));
    EXPECT_NEAR(wrap(rel - k * (path(n) - path(0))), 0.0, 1e-3) << n;
    const double plane = k * steer.dot(layout.position(n) - layout.position(0));
    EXPECT_NEAR(wrap(rel - plane), 0.0, curvature) << n;
  }
}

TEST(PhasesToLoads, RoundTripWithLosslessMatchedReference) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(kBox.b_min, kBox.b_max);
  const cdouble z0(73.13, 0.0);
  for (int i = 0; i < 1000; ++i) {
    const double b = u(rng);
    const VectorXd theta = VectorXd::Constant(1, ris3d::load_phase(cdouble(0.0, b), z0));
    const auto out = ris3d::phases_to_loads(theta, z0, 0.0, kBox);
    EXPECT_EQ(out.clamped, 0);
    EXPECT_NEAR(out.config.b(0), b, 1e-9 * std::max(1.0, std::abs(b))) << b;
  }
}

TEST(PhasesToLoads, PoleAtZeroPhaseClampsToEdges) {
  const cdouble z0(73.13, 41.79);
  VectorXd theta(4);
  theta << 0.0, 5e-10, -5e-10, 2 * kPi;
  const auto out = ris3d::phases_to_loads(theta, z0, 0.2, kBox);
  EXPECT_EQ(out.clamped, 4);
  EXPECT_EQ(out.config.b(0), kBox.b_max);
  EXPECT_EQ(out.config.b(1), kBox.b_max);
  EXPECT_EQ(out.config.b(2), kBox.b_min);
  EXPECT_EQ(out.config.b(3), kBox.b_max);
  EXPECT_EQ(out.config.r0, 0.2);
}

TEST(PhasesToLoads, HalfTurnIsRegular) {
  const auto out = ris3d::phases_to_loads(VectorXd::Constant(1, kPi), cdouble(73.13, 0.0), 0.0, kBox);
  EXPECT_EQ(out.clamped, 0);
  EXPECT_NEAR(out.config.b(0), 0.0, 1e-12);
}

TEST(PhasesToLoads, RandomPhasesAreFiniteAndFeasible) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  VectorXd theta(2000);
  for (auto& t : theta) t = u(rng);
  const auto out = ris3d::phases_to_loads(theta, cdouble(73.13, 41.79), 0.2, kBox);
  EXPECT_TRUE(out.config.b.allFinite());
  EXPECT_NO_THROW(out.config.validate(kBox));
  int outside = 0;
  for (auto t : theta) {
    const double b = (cdouble(0, 1) * cdouble(73.13, 41.79) / std::tan(t / 2)).imag();
    outside += b < kBox.b_min || b > kBox.b_max;
  }
  EXPECT_EQ(out.clamped, outside);
}

TEST(PhasesToLoads, Errors) {
  EXPECT_THROW(ris3d::phases_to_loads(VectorXd::Constant(1, NAN), 73.0, 0.2, kBox), ris3d::DomainError);
  EXPECT_THROW(ris3d::phases_to_loads(VectorXd::Zero(1), 73.0, -1.0, kBox), ris3d::ValidationError);
}

TEST(RunBaseline, CylinderScenario) {
  const auto layout = ris3d::initial_shape(
      {ris3d::ShapeKind::Cylinder, 16, kLink.lambda / 2, 0.1, kLink.lambda / 500}, kLink.lambda);
  const auto r = ris3d::run_baseline(kLink, layout, kBox);
  EXPECT_EQ(r.state.layout.positions, layout.positions);
  EXPECT_NO_THROW(r.loads.config.validate(kBox));
  EXPECT_EQ(r.state.channel.config().b, r.loads.config.b);
  EXPECT_TRUE(std::isfinite(r.snr_db));
  EXPECT_EQ(r.snr_db, kLink.snr_db(r.state.channel.channel()));
  const auto imp = ris3d::assemble(layout, kLink.p_bs, kLink.p_ue, kLink.lambda);
  EXPECT_EQ(r.theta, ris3d::phase_profile(imp));
}

}  // namespace
