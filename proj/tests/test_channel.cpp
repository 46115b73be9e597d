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

#include "oracles.hpp"
#include "ris3d/channel.hpp"
#include "ris3d/errors.hpp"
#include "ris3d/geometry.hpp"
#include "ris3d/impedance.hpp"

namespace {

using ris3d::cdouble;
using ris3d::Vec3;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kLambda = 0.01;
const Vec3 kBs(1.3, 0, 0);
const Vec3 kUe(0.98, 0.56, -0.65);
const ris3d::BoxSet kBox{};

ris3d::DipoleLayout upa(int n) {
  return ris3d::initial_shape({ris3d::ShapeKind::Upa, n, kLambda / 2, 0.0, kLambda / 500}, kLambda);
}

VectorXd random_loads(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(kBox.b_min, kBox.b_max);
  VectorXd b(n);
  for (auto& v : b) v = u(rng);
  return b;
}

VectorXcd random_complex(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g;
  VectorXcd v(n);
  for (auto& x : v) x = cdouble(g(rng), g(rng));
  return v;
}

ris3d::ChannelState make_state(const ris3d::DipoleLayout& layout, const VectorXd& b, double r0 = 0.2) {
  return ris3d::ChannelState(ris3d::assemble(layout, kBs, kUe, kLambda), {b, r0}, 1.0);
}

MatrixXcd system_matrix(const ris3d::ChannelState& s) {
  MatrixXcd a = s.impedances().z_ss;
  a.diagonal() += s.config().loads();
  return a;
}

TEST(EndToEndChannel, VanishingRisCouplingLeavesDirectPath) {
  auto imp = ris3d::assemble(upa(4), kBs, kUe, kLambda);
  imp.z_sr.setZero();
  const cdouble y0(0.5, -0.25);
  EXPECT_EQ(ris3d::end_to_end_channel(imp, {VectorXd::Zero(4), 0.2}, y0), y0 * imp.z_rt);
}

TEST(EndToEndChannel, SingleElementScalarInverse) {
  const auto imp = ris3d::assemble(upa(1), kBs, kUe, kLambda);
  const cdouble h = ris3d::end_to_end_channel(imp, {VectorXd::Constant(1, -40.0), 0.2}, 1.0);
  const cdouble expected = imp.z_rt - imp.z_sr(0) * imp.z_st(0) / (imp.z_ss(0, 0) + cdouble(0.2, -40.0));
  EXPECT_LE(oracle::rel(h, expected), 1e-14);
}

TEST(EndToEndChannel, MatchesDenseSolveOnTableOneScenario) {
  std::mt19937_64 rng(1);
  const auto layout = upa(100);
  const auto imp = ris3d::assemble(layout, kBs, kUe, kLambda);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorXd b = random_loads(rng, 100);
    const cdouble h = ris3d::end_to_end_channel(imp, {b, 0.2}, 1.0);
    EXPECT_LE(std::abs(std::norm(h) - std::norm(oracle::channel_dense(imp, b, 0.2, 1.0))) / std::norm(h),
              1e-10);
  }
}

TEST(EndToEndChannel, SingularSystemIsReported) {
  ris3d::ImpedanceSet imp;
  imp.z_rt = 1.0;
  imp.z_sr = VectorXcd::Ones(1);
  imp.z_st = VectorXcd::Ones(1);
  imp.z_ss = MatrixXcd::Constant(1, 1, cdouble(0, -10));
  EXPECT_THROW(ris3d::end_to_end_channel(imp, {VectorXd::Constant(1, 10.0), 0.0}, 1.0),
               ris3d::SingularMatrixError);
}

TEST(Snr, Reference) {
  const double p = 1e-2, noise = 1e-11;
  EXPECT_NEAR(ris3d::snr_db(std::sqrt(noise / p), p, noise), 0.0, 1e-12);
  const cdouble h(3e-4, -2e-4);
  EXPECT_NEAR(ris3d::snr_db(h, 2 * p, noise) - ris3d::snr_db(h, p, noise), 3.0103, 1e-4);
  EXPECT_NEAR(ris3d::snr_db(h, p, noise), 90.0 + 10 * std::log10(std::norm(h)), 1e-10);
  EXPECT_THROW(ris3d::snr_db(h, 0.0, noise), ris3d::DomainError);
  EXPECT_THROW(ris3d::snr_db(h, p, -1.0), ris3d::DomainError);
}

TEST(Snr, GlobalPhaseInvariance) {
  const cdouble h(3e-4, -2e-4);
  for (double phi : {0.3, 1.7, -2.9}) {
    EXPECT_NEAR(ris3d::snr_db(h * std::polar(1.0, phi), 1e-2, 1e-11), ris3d::snr_db(h, 1e-2, 1e-11),
                1e-12);
  }
}

TEST(ChannelState, InverseAndCachedProducts) {
  std::mt19937_64 rng(2);
  const auto s = make_state(upa(16), random_loads(rng, 16));
  const MatrixXcd a = system_matrix(s);
  EXPECT_LE((a * s.inverse() - MatrixXcd::Identity(16, 16)).norm(), 1e-8 * 16);
  EXPECT_LE((s.inverse() - s.inverse().transpose()).norm(), 1e-10 * s.inverse().norm());
  EXPECT_LE((s.g_st() - s.inverse() * s.impedances().z_st).norm(), 1e-12 * s.g_st().norm());
  EXPECT_LE((s.g_sr() - s.inverse() * s.impedances().z_sr).norm(), 1e-12 * s.g_sr().norm());
  EXPECT_LE(oracle::rel(s.channel(), oracle::channel_dense(s.impedances(), s.config().b, 0.2, 1.0)), 1e-10);
  EXPECT_DOUBLE_EQ(s.gain(), std::norm(s.channel()));
  EXPECT_GE(s.condition(), 1.0);
}

TEST(ChannelState, SizeMismatchAndBoxViolation) {
  const auto imp = ris3d::assemble(upa(4), kBs, kUe, kLambda);
  EXPECT_THROW(ris3d::ChannelState(imp, {VectorXd::Zero(3), 0.2}, 1.0), ris3d::ValidationError);
  EXPECT_THROW((ris3d::RisConfig{VectorXd::Constant(4, 500.0), 0.2}.validate(kBox)),
               ris3d::ValidationError);
  EXPECT_THROW((ris3d::RisConfig{VectorXd::Zero(4), -0.1}.validate(kBox)), ris3d::ValidationError);
  EXPECT_THROW((ris3d::BoxSet{10.0, -10.0}.validate()), ris3d::ValidationError);
}

TEST(Refresh, UnchangedInputsAreBitwiseIdentical) {
  std::mt19937_64 rng(3);
  const auto s = make_state(upa(9), random_loads(rng, 9));
  EXPECT_EQ(ris3d::refresh(s, s.config()).channel(), s.channel());
  EXPECT_EQ(ris3d::refresh(s, s.impedances()).channel(), s.channel());
}

TEST(Refresh, ElementMoveMatchesFromScratch) {
  std::mt19937_64 rng(4);
  auto layout = upa(9);
  const auto s = make_state(layout, random_loads(rng, 9));
  layout.positions.col(4) += Vec3(0.0004, -0.0003, 0.0002);
  const auto imp = ris3d::assemble(layout, kBs, kUe, kLambda);
  const auto moved = ris3d::refresh(s, imp);
  EXPECT_LE(oracle::rel(moved.channel(), oracle::channel_dense(imp, s.config().b, 0.2, 1.0)), 1e-10);
}

TEST(Refresh, ReactanceChangeKeepsImpedances) {
  std::mt19937_64 rng(5);
  const auto s = make_state(upa(9), random_loads(rng, 9));
  ris3d::RisConfig cfg = s.config();
  cfg.b(2) += 25.0;
  const auto t = ris3d::refresh(s, cfg);
  EXPECT_EQ(t.impedances().z_ss, s.impedances().z_ss);
  EXPECT_GT((t.inverse() - s.inverse()).norm(), 0.0);
}

// Delta with only row/column k non-zero, as a dense matrix.
MatrixXcd dense_delta(Eigen::Index n, Eigen::Index k, const VectorXcd& col) {
  MatrixXcd d = MatrixXcd::Zero(n, n);
  d.col(k) = col;
  d.row(k) = col.transpose();
  return d;
}

cdouble dense_perturbed(const ris3d::ChannelState& s, const ris3d::ElementPerturbation& p) {
  ris3d::ImpedanceSet imp = s.impedances();
  imp.z_ss += dense_delta(s.size(), p.k, p.delta_col);
  imp.z_sr(p.k) += p.delta_sr;
  imp.z_st(p.k) += p.delta_st;
  return oracle::channel_dense(imp, s.config().b, s.config().r0, 1.0);
}

ris3d::ElementPerturbation scaled_perturbation(std::mt19937_64& rng, const ris3d::ChannelState& s,
                                               Eigen::Index k, double target) {
  ris3d::ElementPerturbation p;
  p.k = k;
  p.delta_col = random_complex(rng, s.size());
  p.delta_col *= target / ris3d::perturbation_norm(s, k, p.delta_col);
  const VectorXcd sides = random_complex(rng, 2);
  p.delta_sr = target * std::abs(s.impedances().z_sr(k)) * sides(0);
  p.delta_st = target * std::abs(s.impedances().z_st(k)) * sides(1);
  return p;
}

TEST(PerturbationNorm, MatchesDenseSpectralNorm) {
  std::mt19937_64 rng(6);
  const auto s = make_state(upa(12), random_loads(rng, 12));
  for (Eigen::Index k : {0, 5, 11}) {
    const VectorXcd col = random_complex(rng, 12);
    const MatrixXcd gd = s.inverse() * dense_delta(12, k, col);
    const double dense = Eigen::JacobiSVD<MatrixXcd>(gd).singularValues()(0);
    EXPECT_LE(std::abs(ris3d::perturbation_norm(s, k, col) - dense), 1e-10 * dense);
  }
}

TEST(Neumann, ZeroPerturbationReturnsCachedChannel) {
  std::mt19937_64 rng(7);
  const auto s = make_state(upa(8), random_loads(rng, 8));
  ris3d::ElementPerturbation p{3, VectorXcd::Zero(8), 0.0, 0.0};
  EXPECT_LE(oracle::rel(ris3d::neumann_perturbed_channel(s, p), s.z_rst()), 1e-12);
  EXPECT_LE(oracle::rel(ris3d::exact_perturbed_channel(s, p), s.z_rst()), 1e-12);
}

TEST(Neumann, SecondOrderRemainder) {
  std::mt19937_64 rng(8);
  const auto s = make_state(upa(16), random_loads(rng, 16));
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = scaled_perturbation(rng, s, trial % 16, 0.01);
    const cdouble exact = dense_perturbed(s, p);
    EXPECT_LE(oracle::rel(ris3d::neumann_perturbed_channel(s, p), exact), 3 * 0.01 * 0.01) << trial;
  }
}

TEST(Neumann, CapIsEnforced) {
  std::mt19937_64 rng(9);
  const auto s = make_state(upa(8), random_loads(rng, 8));
  const auto p = scaled_perturbation(rng, s, 2, 0.5);
  EXPECT_THROW(ris3d::neumann_perturbed_channel(s, p), ris3d::ApproximationDomainError);
  EXPECT_NO_THROW(ris3d::neumann_perturbed_channel(s, p, 0.6));
  EXPECT_THROW(ris3d::neumann_perturbed_channel(s, {8, VectorXcd::Zero(8), 0.0, 0.0}), ris3d::DomainError);
}

TEST(Neumann, DerivativesMatchComplexDifferences) {
  std::mt19937_64 rng(10);
  const auto s = make_state(upa(8), random_loads(rng, 8));
  const auto p = scaled_perturbation(rng, s, 5, 0.05);
  const auto t = ris3d::NeumannTerms::at(s, 5);
  // evaluate is affine in each argument, so a large central step is exact.
  const double h = 1.0;
  const cdouble dsr = (t.evaluate(p.delta_col, p.delta_sr + h, p.delta_st) -
                       t.evaluate(p.delta_col, p.delta_sr - h, p.delta_st)) / (2 * h);
  EXPECT_LE(oracle::rel(t.d_delta_sr(p.delta_col, p.delta_st), dsr), 1e-7);
  const cdouble dst = (t.evaluate(p.delta_col, p.delta_sr, p.delta_st + h) -
                       t.evaluate(p.delta_col, p.delta_sr, p.delta_st - h)) / (2 * h);
  EXPECT_LE(oracle::rel(t.d_delta_st(p.delta_col, p.delta_sr), dst), 1e-7);
  const VectorXcd grad = t.d_delta(p.delta_sr, p.delta_st);
  for (Eigen::Index n = 0; n < 8; ++n) {
    VectorXcd up = p.delta_col, down = p.delta_col;
    up(n) += h;
    down(n) -= h;
    const cdouble fd = (t.evaluate(up, p.delta_sr, p.delta_st) - t.evaluate(down, p.delta_sr, p.delta_st)) / (2 * h);
    EXPECT_LE(std::abs(grad(n) - fd), 1e-9 * grad.norm()) << n;
  }
}

TEST(ExactPerturbation, WoodburyMatchesDenseSolve) {
  std::mt19937_64 rng(11);
  const auto s = make_state(upa(16), random_loads(rng, 16));
  for (double target : {1e-3, 0.1, 0.8, 3.0}) {
    for (Eigen::Index k : {0, 7, 15}) {
      const auto p = scaled_perturbation(rng, s, k, target);
      EXPECT_LE(oracle::rel(ris3d::exact_perturbed_channel(s, p), dense_perturbed(s, p)), 1e-10)
          << target << " " << k;
    }
  }
}

TEST(ExactPerturbation, PhysicalElementMove) {
  std::mt19937_64 rng(12);
  auto layout = upa(16);
  const auto s = make_state(layout, random_loads(rng, 16));
  const Eigen::Index k = 6;
  const Vec3 moved = layout.position(k) + Vec3(0.0003, -0.0002, 0.0004);
  const auto c = ris3d::element_coupling(layout, k, moved, kBs, kUe, kLambda);
  const auto& imp = s.impedances();
  const ris3d::ElementPerturbation p{k, c.z_ss_column - imp.z_ss.col(k), c.z_sr - imp.z_sr(k),
                                     c.z_st - imp.z_st(k)};
  layout.positions.col(k) = moved;
  const auto fresh = make_state(layout, s.config().b);
  EXPECT_LE(oracle::rel(ris3d::exact_perturbed_channel(s, p), fresh.z_rst()), 1e-10);
}

}  // namespace
