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

#include "ris3d/config_optimizer.hpp"
#include "ris3d/errors.hpp"
#include "ris3d/geometry.hpp"

namespace {

using ris3d::cdouble;
using ris3d::Vec3;
using Eigen::VectorXd;

constexpr double kLambda = 0.01;
const Vec3 kBs(1.3, 0, 0);
const Vec3 kUe(0.98, 0.56, -0.65);
const ris3d::BoxSet kBox{};

ris3d::ChannelState state_for(const ris3d::Mat3X& q, const VectorXd& b, const Vec3& bs = kBs,
                              const Vec3& ue = kUe) {
  const ris3d::DipoleLayout layout{q, kLambda / 4, kLambda / 500};
  return ris3d::ChannelState(ris3d::assemble(layout, bs, ue, kLambda), {b, 0.2}, 1.0);
}

ris3d::Mat3X random_layout(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-0.02, 0.02);
  ris3d::Mat3X q(3, n);
  for (auto& v : q.reshaped()) v = u(rng);
  return q;
}

double gain_at(const ris3d::ChannelState& s, const VectorXd& b) {
  return ris3d::refresh(s, ris3d::RisConfig{b, s.config().r0}).gain();
}

TEST(ConfigGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> load(-300.0, 150.0);
  for (int trial = 0; trial < 5; ++trial) {
    VectorXd b(8);
    for (auto& v : b) v = load(rng);
    const auto s = state_for(random_layout(rng, 8), b);
    const VectorXd g = ris3d::config_gradient(s);
    const double h = 1e-3;
    for (Eigen::Index n = 0; n < 8; ++n) {
      VectorXd up = b, down = b;
      up(n) += h;
      down(n) -= h;
      const double fd = (gain_at(s, up) - gain_at(s, down)) / (2 * h);
      EXPECT_LE(std::abs(fd - g(n)), 1e-5 * g.norm()) << trial << " " << n;
    }
  }
}

TEST(ConfigGradient, MirrorPairHasEqualComponents) {
  ris3d::Mat3X q(3, 2);
  q << 0.0, 0.0, 0.004, -0.004, 0.001, 0.001;
  const auto s = state_for(q, VectorXd::Constant(2, -30.0), Vec3(1.3, 0, 0), Vec3(0.98, 0, -0.65));
  const VectorXd g = ris3d::config_gradient(s);
  EXPECT_LE(std::abs(g(0) - g(1)), 1e-12 * g.norm());
}

// Objective of the single-element problem in closed form.
double scalar_gain(const ris3d::ImpedanceSet& imp, double b) {
  return std::norm(imp.z_rt - imp.z_sr(0) * imp.z_st(0) / (imp.z_ss(0, 0) + cdouble(0.2, b)));
}

TEST(OptimizeConfig, SingleElementMatchesGridScan) {
  for (const Vec3& pos : {Vec3(0, 0, 0), Vec3(0.02, -0.01, 0.005), Vec3(-0.03, 0.01, 0.0)}) {
    const auto s = state_for(pos, VectorXd::Zero(1));
    const auto result = ris3d::optimize_config(s, kBox);
    const double step = 1e-4;
    const auto cells = static_cast<long>(std::round((kBox.b_max - kBox.b_min) / step));
    double best = -1.0;
    long best_i = 0;
    for (long i = 0; i <= cells; ++i) {
      const double v = scalar_gain(s.impedances(), kBox.b_min + static_cast<double>(i) * step);
      if (v > best) best = v, best_i = i;
    }
    const double b_grid = kBox.b_min + static_cast<double>(best_i) * step;
    const double cell_variation =
        std::max(std::abs(scalar_gain(s.impedances(), std::min(b_grid + step, kBox.b_max)) - best),
                 std::abs(scalar_gain(s.impedances(), std::max(b_grid - step, kBox.b_min)) - best));
    EXPECT_LE(std::abs(result.state.gain() - best), cell_variation + 1e-15 * best)
        << "b* = " << result.state.config().b(0) << ", grid b = " << b_grid;
    const double b = result.state.config().b(0);
    if (b > kBox.b_min + 1.0 && b < kBox.b_max - 1.0) {
      EXPECT_LE(std::abs(ris3d::config_gradient(result.state)(0)) * std::max(1.0, std::abs(b)),
                1e-4 * result.state.gain());
    }
  }
}

TEST(OptimizeConfig, BeatsRandomSearch) {
  std::mt19937_64 rng(2);
  const auto s = state_for(random_layout(rng, 4), VectorXd::Zero(4));
  const double optimum = ris3d::optimize_config(s, kBox).state.gain();
  std::uniform_real_distribution<double> u(kBox.b_min, kBox.b_max);
  double best = 0.0;
  for (int i = 0; i < 10000; ++i) {
    VectorXd b(4);
    for (auto& v : b) v = u(rng);
    best = std::max(best, gain_at(s, b));
  }
  EXPECT_GE(optimum, best);
}

TEST(OptimizeConfig, MonotoneFeasibleAndImproving) {
  std::mt19937_64 rng(3);
  const auto s = state_for(random_layout(rng, 12), VectorXd::Zero(12));
  const auto r = ris3d::optimize_config(s, kBox);
  ASSERT_FALSE(r.objective.empty());
  EXPECT_EQ(r.objective.front(), s.gain());
  for (std::size_t i = 1; i < r.objective.size(); ++i) EXPECT_GE(r.objective[i], r.objective[i - 1]);
  EXPECT_EQ(r.objective.back(), r.state.gain());
  EXPECT_GT(r.state.gain(), s.gain());
  EXPECT_GE(r.state.config().b.minCoeff(), kBox.b_min);
  EXPECT_LE(r.state.config().b.maxCoeff(), kBox.b_max);
  EXPECT_TRUE(r.converged);
  EXPECT_LE(r.iterations, ris3d::ConfigSettings{}.max_iters);
}

TEST(OptimizeConfig, FixedPoint) {
  std::mt19937_64 rng(4);
  const auto s = state_for(random_layout(rng, 6), VectorXd::Zero(6));
  const auto first = ris3d::optimize_config(s, kBox);
  const auto second = ris3d::optimize_config(first.state, kBox);
  EXPECT_TRUE(second.converged);
  EXPECT_LE((second.state.config().b - first.state.config().b).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LE(std::abs(second.state.gain() - first.state.gain()), 1e-9 * first.state.gain());
}

TEST(OptimizeConfig, IterationCapIsRespected) {
  std::mt19937_64 rng(5);
  const auto s = state_for(random_layout(rng, 6), VectorXd::Zero(6));
  ris3d::ConfigSettings settings;
  settings.max_iters = 2;
  const auto r = ris3d::optimize_config(s, kBox, settings);
  EXPECT_LE(r.iterations, 2);
  EXPECT_LE(r.objective.size(), 3u);
}

TEST(ConfigSettings, Validation) {
  ris3d::ConfigSettings s;
  EXPECT_NO_THROW(s.validate());
  s.max_iters = 0;
  EXPECT_THROW(s.validate(), ris3d::ValidationError);
  s = {};
  s.tol = 0.0;
  EXPECT_THROW(s.validate(), ris3d::ValidationError);
  s = {};
  s.shrink = 1.0;
  EXPECT_THROW(s.validate(), ris3d::ValidationError);
}

}  // namespace
