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
#include <string>
#include <variant>

#include <gtest/gtest.h>

#include "ris3d/errors.hpp"
#include "ris3d/geometry.hpp"
#include "ris3d/scenario.hpp"

namespace {

using ris3d::Vec3;

TEST(ParseScenario, EmptyTextGivesTableOneDefaults) {
  const auto s = ris3d::parse_scenario("");
  EXPECT_EQ(s.p_bs, Vec3(1.3, 0, 0));
  EXPECT_EQ(s.p_ue, Vec3(0.98, 0.56, -0.65));
  EXPECT_EQ(s.lambda, 0.01);
  EXPECT_EQ(s.power_dbm, 10.0);
  EXPECT_EQ(s.noise_dbm, -80.0);
  EXPECT_EQ(s.y0, ris3d::cdouble(1.0, 0.0));
  EXPECT_EQ(s.r0, 0.2);
  EXPECT_EQ(s.box.b_min, -5000.0);
  EXPECT_EQ(s.box.b_max, 188.0);
  EXPECT_EQ(s.solver.max_iters, 2000);
  EXPECT_EQ(s.solver.epsilon, 1e-6);
  EXPECT_EQ(s.ball_radius, 0.05);
  EXPECT_EQ(s.count, 100);
  EXPECT_EQ(s.shape, ris3d::ShapeKind::Upa);
  EXPECT_EQ(s.shape_radius, 0.1);

  const auto link = s.link();
  EXPECT_NEAR(link.power_w, 1e-2, 1e-17);
  EXPECT_NEAR(link.noise_w, 1e-11, 1e-26);
  EXPECT_EQ(s.wire_radius_m(), 0.01 / 500);
  EXPECT_EQ(s.spacing_m(), 0.01 / 2);
  const auto solver = s.solver_settings();
  EXPECT_EQ(solver.alpha_init, 0.01 / 10);
  EXPECT_EQ(solver.bisection_tol, 0.01 / 10000);
}

TEST(ParseScenario, UlaSpacingDefault) {
  const auto s = ris3d::parse_scenario("[initial_shape]\nkind = ula\n");
  EXPECT_EQ(s.spacing_m(), 0.01 / 16);
}

TEST(ParseScenario, FullSyntax) {
  const auto s = ris3d::parse_scenario(R"(# desk-scale run
[scenario]
p_bs = 1.0, 0.5, 0.0   ; trailing comment
lambda = 0.02
y0 = 0.5, -0.25
b_min = -100
b_max = 100

[feasible_set]
kind = constrained
scale = 2

[initial_shape]
kind = sphere
count = 16
radius = 0.2

[solver]
epsilon = 1e-8
optimize_positions = false

[sweep]
counts = 4, 8
)");
  EXPECT_EQ(s.p_bs, Vec3(1.0, 0.5, 0.0));
  EXPECT_EQ(s.lambda, 0.02);
  EXPECT_EQ(s.y0, ris3d::cdouble(0.5, -0.25));
  EXPECT_EQ(s.box.b_min, -100.0);
  EXPECT_EQ(s.set_kind, ris3d::SetKind::Constrained);
  EXPECT_EQ(s.constraint_scale, 2.0);
  EXPECT_EQ(s.shape, ris3d::ShapeKind::Sphere);
  EXPECT_EQ(s.count, 16);
  EXPECT_EQ(s.solver.epsilon, 1e-8);
  EXPECT_FALSE(s.solver.optimize_positions);
  EXPECT_EQ(s.sweep_counts, (std::vector<Eigen::Index>{4, 8}));
}

TEST(ParseScenario, InvertedBoxIsAValidationError) {
  EXPECT_THROW(ris3d::parse_scenario("[scenario]\nb_min = 200\nb_max = 100\n"), ris3d::ValidationError);
}

TEST(ParseScenario, UnknownKeyNamesTheKey) {
  try {
    ris3d::parse_scenario("[scenario]\nlambda = 0.01\n  fooo = 3\n");
    FAIL() << "expected ParseError";
  } catch (const ris3d::ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("fooo"), std::string::npos);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 3);
    EXPECT_EQ(e.kind(), "parse");
  }
}

TEST(ParseScenario, MalformedInput) {
  EXPECT_THROW(ris3d::parse_scenario("[nowhere]\n"), ris3d::ParseError);
  EXPECT_THROW(ris3d::parse_scenario("[scenario\n"), ris3d::ParseError);
  EXPECT_THROW(ris3d::parse_scenario("lambda = 0.01\n"), ris3d::ParseError);
  EXPECT_THROW(ris3d::parse_scenario("[scenario]\nlambda\n"), ris3d::ParseError);
  EXPECT_THROW(ris3d::parse_scenario("[scenario]\np_bs = 1, 2\n"), ris3d::ParseError);
  EXPECT_THROW(ris3d::parse_scenario("[initial_shape]\nkind = cone\n"), ris3d::Error);
  try {
    ris3d::parse_scenario("[scenario]\nlambda = 1cm\n");
    FAIL() << "expected ParseError";
  } catch (const ris3d::ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 10);
  }
}

TEST(ParseScenario, InvariantViolations) {
  EXPECT_THROW(ris3d::parse_scenario("[scenario]\nr0 = -1\n"), ris3d::ValidationError);
  EXPECT_THROW(ris3d::parse_scenario("[scenario]\nwire_radius = 0.5\n"), ris3d::ValidationError);
  EXPECT_THROW(ris3d::parse_scenario("[initial_shape]\ncount = 0\n"), ris3d::ValidationError);
  EXPECT_THROW(ris3d::parse_scenario("[solver]\nmax_iters = 0\n"), ris3d::ValidationError);
  EXPECT_THROW(ris3d::parse_scenario("[analysis]\npercentile = 120\n"), ris3d::ValidationError);
}

TEST(ApplyOverride, SetsKeys) {
  auto s = ris3d::parse_scenario("");
  ris3d::apply_override(s, "initial_shape.count=16");
  ris3d::apply_override(s, "solver.max_iters = 20");
  ris3d::apply_override(s, "scenario.p_ue=1,2,3");
  EXPECT_EQ(s.count, 16);
  EXPECT_EQ(s.solver.max_iters, 20);
  EXPECT_EQ(s.p_ue, Vec3(1, 2, 3));
  EXPECT_THROW(ris3d::apply_override(s, "count=16"), ris3d::ParseError);
  EXPECT_THROW(ris3d::apply_override(s, "solver.fooo=1"), ris3d::ParseError);
  EXPECT_THROW(ris3d::apply_override(s, "nowhere.count=1"), ris3d::ParseError);
}

TEST(ToIni, RoundTripsExactly) {
  auto s = ris3d::parse_scenario("");
  ris3d::apply_override(s, "scenario.lambda=0.0123456789012345");
  ris3d::apply_override(s, "initial_shape.kind=cylinder");
  ris3d::apply_override(s, "feasible_set.kind=constrained");
  ris3d::apply_override(s, "scenario.y0=0.1,0.7");
  const std::string text = ris3d::to_ini(s);
  const auto back = ris3d::parse_scenario(text);
  EXPECT_EQ(ris3d::to_ini(back), text);
  EXPECT_EQ(back.lambda, 0.0123456789012345);
  EXPECT_EQ(back.y0, ris3d::cdouble(0.1, 0.7));
  EXPECT_EQ(back.shape, ris3d::ShapeKind::Cylinder);
  EXPECT_EQ(back.solver_settings().alpha_init, s.solver_settings().alpha_init);
}

TEST(FeasibleSet, BallGrowsToHoldTheInitialShape) {
  auto s = ris3d::parse_scenario("[initial_shape]\nkind = cylinder\ncount = 16\n");
  const auto layout = ris3d::initial_shape(s.shape_spec(), s.lambda);
  const auto grown = std::get<ris3d::Ball>(s.feasible_set(layout));
  EXPECT_NEAR(grown.radius, layout.positions.colwise().norm().maxCoeff(), 1e-15);
  EXPECT_GT(grown.radius, 0.05);
  ris3d::apply_override(s, "feasible_set.grow_to_fit=false");
  EXPECT_EQ(std::get<ris3d::Ball>(s.feasible_set(layout)).radius, 0.05);
  ris3d::apply_override(s, "feasible_set.kind=constrained");
  EXPECT_TRUE(std::holds_alternative<ris3d::CylindricalBand>(s.feasible_set(layout)));
}

TEST(Power, DbmConversion) {
  EXPECT_NEAR(ris3d::dbm_to_watts(0.0), 1e-3, 1e-18);
  EXPECT_NEAR(ris3d::dbm_to_watts(30.0), 1.0, 1e-15);
}

}  // namespace
