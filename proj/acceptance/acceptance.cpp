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

// Acceptance runner. Prints one PASS/FAIL line per criterion and exits nonzero
// when any selected criterion fails. With no arguments every criterion runs;
// otherwise only the named ones.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <json.hpp>

#include "oracles.hpp"
#include "ris3d/analysis.hpp"
#include "ris3d/baseline.hpp"
#include "ris3d/config_optimizer.hpp"
#include "ris3d/errors.hpp"
#include "ris3d/geometry.hpp"
#include "ris3d/impedance.hpp"
#include "ris3d/scenario.hpp"
#include "ris3d/shape_optimizer.hpp"

#ifndef RIS3D_CLI_PATH
#define RIS3D_CLI_PATH "ris3d"
#endif

namespace {

namespace fs = std::filesystem;
using namespace ris3d;
using Eigen::VectorXd;

constexpr double kLambda = 0.01;
constexpr double kH = kLambda / 4;
constexpr double kWire = kLambda / 500;

struct Outcome {
  bool pass = false;
  std::string detail;
};

template <class... A> std::string fmt(const char* f, A... a) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

Vec3 uniform_point(std::mt19937_64& rng, double span) {
  std::uniform_real_distribution<double> u(-span, span);
  return Vec3(u(rng), u(rng), u(rng));
}

bool has_colinear_pair(const Mat3X& q) {
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < q.cols(); ++j) {
      if (transverse_offset<double>(q.col(i) - q.col(j)) < 0.05 * kLambda) return true;
    }
  }
  return false;
}

DipoleLayout random_layout(std::mt19937_64& rng, int n, double span = 0.02) {
  Mat3X q(3, n);
  do {
    for (int i = 0; i < n; ++i) q.col(i) = uniform_point(rng, span);
  } while (has_colinear_pair(q));
  return {q, kH, kWire};
}

VectorXd random_loads(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(-300.0, 150.0);
  VectorXd b(n);
  for (auto& v : b) v = u(rng);
  return b;
}

Scenario desk_scenario(ShapeKind shape, Eigen::Index n, SetKind set) {
  Scenario s;
  s.shape = shape;
  s.count = n;
  s.set_kind = set;
  s.validate();
  return s;
}

JointResult run_scenario(const Scenario& s) {
  const DipoleLayout initial = initial_shape(s.shape_spec(), s.lambda);
  return run_joint_optimization(s.link(), initial, s.feasible_set(initial), s.box,
                                s.solver_settings());
}

// -- criteria ---------------------------------------------------------------

Outcome kernel_fidelity() {
  std::mt19937_64 rng(101);
  double worst = 0.0, worst_recip = 0.0;
  for (int i = 0; i < 50; ++i) {
    Vec3 p, q;
    do {
      p = uniform_point(rng, 2 * kLambda);
      q = uniform_point(rng, 2 * kLambda);
    } while (transverse_offset<double>(q - p) < 0.05 * kLambda);
    const cdouble z = mutual_impedance<double>(q, p, kLambda, kH, kWire);
    worst = std::max(worst, oracle::rel(z, oracle::induced_emf(q, p, kLambda)));
    const cdouble zr = mutual_impedance<double>(p, q, kLambda, kH, kWire);
    worst_recip = std::max(worst_recip, std::abs(z - zr) / std::abs(z));
  }
  return {worst <= 1e-6 && worst_recip <= 1e-12,
          fmt("50 pairs: max rel err vs induced EMF %.2e (<= 1e-6), max reciprocity %.2e (<= 1e-12)",
              worst, worst_recip)};
}

Outcome gradient_fidelity() {
  std::mt19937_64 rng(202);
  double worst_z = 0.0;
  for (int i = 0; i < 50; ++i) {
    Vec3 k, l;
    do {
      k = uniform_point(rng, 2 * kLambda);
      l = uniform_point(rng, 2 * kLambda);
    } while (transverse_offset<double>(k - l) < 0.05 * kLambda);
    const CVector3<double> g = impedance_gradient<double>(k, l, kLambda, kH, kWire);
    const double h = 1e-7;
    CVector3<double> fd;
    for (int c = 0; c < 3; ++c) {
      Vec3 up = k, down = k;
      up(c) += h;
      down(c) -= h;
      fd(c) = (mutual_impedance<double>(up, l, kLambda, kH, kWire) -
               mutual_impedance<double>(down, l, kLambda, kH, kWire)) / (2 * h);
    }
    worst_z = std::max(worst_z, (g - fd).norm() / g.norm());
  }

  const Link link;
  double worst_q = 0.0;
  for (int i = 0; i < 50; ++i) {
    const DipoleLayout layout = random_layout(rng, 8);
    const VectorXd b = random_loads(rng, 8);
    const Eigen::Index k = i % 8;
    const Vec3 g = position_gradient(make_state(link, layout, b), k, link);
    auto gain = [&](const DipoleLayout& l) {
      return std::norm(oracle::channel_dense(assemble(l, link.p_bs, link.p_ue, kLambda), b,
                                             link.r0, link.y0));
    };
    const double h = 1e-7;
    Vec3 fd;
    for (int c = 0; c < 3; ++c) {
      DipoleLayout up = layout, down = layout;
      up.positions(c, k) += h;
      down.positions(c, k) -= h;
      fd(c) = (gain(up) - gain(down)) / (2 * h);
    }
    worst_q = std::max(worst_q, (g - fd).norm() / g.norm());
  }
  return {worst_z <= 1e-5 && worst_q <= 1e-4,
          fmt("impedance_gradient max rel %.2e (<= 1e-5); position_gradient N=8 max rel %.2e "
              "(<= 1e-4); 50 instances each",
              worst_z, worst_q)};
}

Outcome neumann_remainder() {
  std::mt19937_64 rng(303);
  const Link link;
  std::uniform_real_distribution<double> log_mag(-7.0, -3.0);
  std::normal_distribution<double> gauss;
  double worst = 0.0, lo = INFINITY, hi = 0.0;
  int done = 0;
  const ShapeKind shapes[] = {ShapeKind::Ula, ShapeKind::Upa, ShapeKind::Cylinder, ShapeKind::Sphere};
  for (int round = 0; done < 200; ++round) {
    const ShapeKind kind = shapes[round % 4];
    const double spacing = kind == ShapeKind::Ula ? kLambda / 16 : kLambda / 2;
    const DipoleLayout layout = initial_shape({kind, 16, spacing, 0.1, kWire}, kLambda);
    const ShapeState state = make_state(link, layout, random_loads(rng, 16));
    for (int t = 0; t < 10; ++t) {
      const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, 15)(rng);
      const Vec3 dir = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
      const Vec3 moved = layout.position(k) + std::pow(10.0, log_mag(rng)) * dir;
      ElementCoupling c;
      try {
        c = element_coupling(layout, k, moved, link.p_bs, link.p_ue, kLambda);
      } catch (const ColinearError&) {
        continue;
      } catch (const OverlapError&) {
        continue;
      }
      const auto& imp = state.channel.impedances();
      ElementPerturbation p{k, c.z_ss_column - imp.z_ss.col(k), c.z_sr - imp.z_sr(k),
                            c.z_st - imp.z_st(k)};
      const double norm = perturbation_norm(state.channel, k, p.delta_col);
      if (norm > 0.1 || norm == 0.0) continue;
      ImpedanceSet exact_imp = imp;
      apply_coupling(exact_imp, k, c);
      const cdouble exact =
          oracle::channel_dense(exact_imp, state.channel.config().b, link.r0, link.y0) / link.y0;
      const cdouble approx = neumann_perturbed_channel(state.channel, p);
      worst = std::max(worst, std::abs(approx - exact) / (norm * norm * std::abs(exact)));
      lo = std::min(lo, norm);
      hi = std::max(hi, norm);
      if (++done == 200) break;
    }
  }
  return {worst <= 3.0,
          fmt("200 single-element moves, ||G Delta|| in [%.1e, %.1e]: max |h_approx - h_exact| / "
              "(||G Delta||^2 |h_exact|) = %.3f (<= 3)",
              lo, hi, worst)};
}

Outcome monotone_ascent() {
  bool ok = true;
  std::ostringstream detail;
  double upa_gain[2] = {0.0, 0.0}, upa_gain_row0[2] = {0.0, 0.0};
  int worst_iters = 0;
  for (SetKind set : {SetKind::Ball, SetKind::Constrained}) {
    for (ShapeKind shape : {ShapeKind::Ula, ShapeKind::Upa, ShapeKind::Cylinder, ShapeKind::Sphere}) {
      for (int ni = 0; ni < 2; ++ni) {
        const Eigen::Index n = ni == 0 ? 4 : 16;
        const Scenario s = desk_scenario(shape, n, set);
        const JointResult r = run_scenario(s);
        const auto& rows = r.trace.rows;
        bool monotone = true;
        for (std::size_t i = 1; i < rows.size(); ++i) monotone &= rows[i].snr_db >= rows[i - 1].snr_db;
        const int iters = static_cast<int>(rows.size()) - 1;
        const bool terminated = iters <= s.solver.max_iters && (r.converged || iters == s.solver.max_iters);
        worst_iters = std::max(worst_iters, iters);
        if (!monotone || !terminated || rows.back().snr_db < r.initial_snr_db) {
          ok = false;
          detail << " [" << to_string(shape) << " N=" << n
                 << (set == SetKind::Ball ? " unconstrained" : " constrained")
                 << (monotone ? "" : " non-monotone") << (terminated ? "" : " not terminated") << "]";
        }
        if (shape == ShapeKind::Upa && set == SetKind::Ball) {
          upa_gain[ni] = rows.back().snr_db - r.config_only_snr_db;
          upa_gain_row0[ni] = rows.back().snr_db - r.initial_snr_db;
        }
      }
    }
  }
  const bool gain_ok = upa_gain[0] >= 0.5 && upa_gain[1] >= 0.5;
  std::string text = fmt("16 runs monotone and terminated: %s (max %d outer iterations, I_max 2000); "
                         "UPA unconstrained final - initial (optimised configuration, initial "
                         "shape): N=4 %.3f dB, N=16 %.3f dB (>= 0.5); against b = 0: N=4 %.3f dB, "
                         "N=16 %.3f dB",
                         ok ? "yes" : "no", worst_iters, upa_gain[0], upa_gain[1],
                         upa_gain_row0[0], upa_gain_row0[1]);
  return {ok && gain_ok, text + detail.str()};
}

Outcome baseline_dominance() {
  bool ok = true;
  std::ostringstream detail;
  for (SetKind set : {SetKind::Constrained, SetKind::Ball}) {
    const Scenario s = desk_scenario(ShapeKind::Cylinder, 16, set);
    const JointResult r = run_scenario(s);
    const DipoleLayout initial = initial_shape(s.shape_spec(), s.lambda);
    const BaselineResult b = run_baseline(s.link(), initial, s.box);
    const auto [az, pol] = angles_of(s.p_ue);
    const double d_opt = directivity_dbi(r.state.layout, r.state.channel, s.lambda, az, pol);
    const double d_base = directivity_dbi(b.state.layout, b.state.channel, s.lambda, az, pol);
    const double snr_opt = r.trace.rows.back().snr_db;
    ok &= snr_opt >= b.snr_db && d_opt >= d_base;
    detail << (set == SetKind::Ball ? "; unconstrained" : "constrained")
           << fmt(": SNR %.3f vs baseline %.3f dB, directivity to UE %.2f vs %.2f dBi", snr_opt,
                  b.snr_db, d_opt, d_base);
  }
  return {ok, "cylinder N=16 " + detail.str()};
}

Outcome config_oracle() {
  const BoxSet box;
  const Link link;
  double worst_excess = -INFINITY;
  bool grid_ok = true;
  for (const Vec3& pos : {Vec3(0.0, 0.0, 0.0), Vec3(0.02, -0.01, 0.005)}) {
    const DipoleLayout one{Mat3X(pos), kH, kWire};
    const ImpedanceSet imp = assemble(one, link.p_bs, link.p_ue, kLambda);
    const ChannelState start(imp, RisConfig{VectorXd::Zero(1), link.r0}, link.y0);
    const double found = optimize_config(start, box).state.gain();
    auto gain = [&](double b) {
      return std::norm(link.y0 * (imp.z_rt - imp.z_sr(0) * imp.z_st(0) /
                                                 (imp.z_ss(0, 0) + cdouble(link.r0, b))));
    };
    const double step = 1e-4;
    const auto cells = static_cast<long>(std::llround((box.b_max - box.b_min) / step));
    double best = -1.0;
    long best_i = 0;
    for (long i = 0; i <= cells; ++i) {
      const double v = gain(box.b_min + static_cast<double>(i) * step);
      if (v > best) best = v, best_i = i;
    }
    const double b_grid = box.b_min + static_cast<double>(best_i) * step;
    const double resolution = std::max(std::abs(gain(std::min(b_grid + step, box.b_max)) - best),
                                       std::abs(gain(std::max(b_grid - step, box.b_min)) - best));
    const double gap = std::abs(found - best);
    grid_ok &= gap <= resolution + 1e-15 * best;
    worst_excess = std::max(worst_excess, gap / best - resolution / best);
  }

  std::mt19937_64 rng(606);
  const DipoleLayout four = random_layout(rng, 4);
  const ChannelState s4(assemble(four, link.p_bs, link.p_ue, kLambda),
                        RisConfig{VectorXd::Zero(4), link.r0}, link.y0);
  const double optimum = optimize_config(s4, box).state.gain();
  std::uniform_real_distribution<double> u(box.b_min, box.b_max);
  double best_draw = 0.0;
  for (int i = 0; i < 10000; ++i) {
    VectorXd b(4);
    for (auto& v : b) v = u(rng);
    best_draw = std::max(best_draw, std::norm(oracle::channel_dense(s4.impedances(), b, link.r0, link.y0)));
  }
  return {grid_ok && optimum >= best_draw,
          fmt("N=1 1e-4 ohm grid: gap minus one-cell variation %.2e relative (<= 0); N=4 optimum / best "
              "of 10000 draws = %.6f (>= 1)",
              worst_excess, optimum / best_draw)};
}

double field(const Vec3& q) {
  return std::sin(30 * q.x()) * q.y() + std::exp(4 * q.z()) * q.x() * q.x() + 5 * q.y() * q.z();
}

Vec3 field_gradient(const Vec3& q) {
  return Vec3(30 * std::cos(30 * q.x()) * q.y() + 2 * std::exp(4 * q.z()) * q.x(),
              std::sin(30 * q.x()) + 5 * q.z(), 4 * std::exp(4 * q.z()) * q.x() * q.x() + 5 * q.y());
}

double min_pair_distance(const Mat3X& q) {
  double best = INFINITY;
  for (Eigen::Index i = 0; i < q.cols(); ++i) {
    for (Eigen::Index j = i + 1; j < q.cols(); ++j) best = std::min(best, (q.col(i) - q.col(j)).norm());
  }
  return best;
}

Outcome geometry_suite() {
  const SphericalCap cap{0.1, {-0.8, 0.9}, {0.6, 2.2}};
  const CylindricalBand band{0.1, {-1.0, 1.2}, {-0.03, 0.04}};
  const PlanarBox box{0, 0.0, {{-1.0, 1.0}, {-1.0, 1.0}}};
  const Ball ball{0.05};
  const FeasibleSet sets[] = {ball, box, cap, band};
  std::mt19937_64 rng(707);
  int failures = 0;
  std::ostringstream what;
  auto check = [&](bool cond, const char* name) {
    if (!cond && failures++ < 5) what << " " << name;
  };

  for (const FeasibleSet& set : sets) {
    for (int i = 0; i < 500; ++i) {
      const Vec3 p = project(set, uniform_point(rng, 0.3));
      check(contains(set, p) && project(set, p) == p, "idempotence");
    }
  }
  for (const FeasibleSet& set : {FeasibleSet(ball), FeasibleSet(box)}) {
    for (int i = 0; i < 100; ++i) {
      const Vec3 q = uniform_point(rng, 2.0);
      const double dist = (project(set, q) - q).norm();
      for (int j = 0; j < 100; ++j) {
        check(dist <= (project(set, uniform_point(rng, 2.0)) - q).norm() + 1e-15, "optimality");
      }
    }
  }
  for (int i = 0; i < 100; ++i) {
    const Vec3 q = project(cap, uniform_point(rng, 0.3));
    for (int j = 0; j < 100; ++j) {
      check((project(cap, q) - q).norm() <= (project(cap, uniform_point(rng, 0.3)) - q).norm() + 1e-15,
            "optimality");
    }
  }

  const double h = 1e-6;
  for (int i = 0; i < 100; ++i) {
    std::uniform_real_distribution<double> th(-3.0, 3.0), ph(0.2, 2.9), rh(0.05, 0.3);
    const double r = rh(rng), t = th(rng), p = ph(rng);
    auto fs_ = [&](double dr, double dt, double dp) { return field(from_spherical(r + dr, t + dt, p + dp)); };
    const Vec3 fd((fs_(h, 0, 0) - fs_(-h, 0, 0)) / (2 * h),
                  (fs_(0, h, 0) - fs_(0, -h, 0)) / (2 * h) / (r * std::sin(p)),
                  (fs_(0, 0, h) - fs_(0, 0, -h)) / (2 * h) / r);
    const Vec3 q = from_spherical(r, t, p);
    const Vec3 g = rescale_gradient(SphericalCap{r, {-kPi<double>, kPi<double>}, {0.0, kPi<double>}}, q,
                                    field_gradient(q));
    check((g - fd).norm() <= 1e-6 * g.norm(), "spherical gradient");

    const double z = th(rng) * 0.01;
    auto fc = [&](double dr, double dt, double dz) {
      return field(Vec3((r + dr) * std::cos(t + dt), (r + dr) * std::sin(t + dt), z + dz));
    };
    const Vec3 fdc((fc(h, 0, 0) - fc(-h, 0, 0)) / (2 * h), (fc(0, h, 0) - fc(0, -h, 0)) / (2 * h) / r,
                   (fc(0, 0, h) - fc(0, 0, -h)) / (2 * h));
    const Vec3 qc(r * std::cos(t), r * std::sin(t), z);
    const Vec3 gc = rescale_gradient(CylindricalBand{r, {-kPi<double>, kPi<double>}, {-1.0, 1.0}}, qc,
                                     field_gradient(qc));
    check((gc - fdc).norm() <= 1e-6 * gc.norm(), "cylindrical gradient");
  }
  for (const FeasibleSet& set : {FeasibleSet(ball), FeasibleSet(cap), FeasibleSet(band)}) {
    for (int i = 0; i < 20; ++i) {
      const Vec3 q = project(set, uniform_point(rng, 0.2));
      const Vec3 g = rescale_gradient(set, q, field_gradient(q));
      const Vec3 d = uniform_point(rng, 1.0);
      const double step = 1e-7;
      const double rate = (field(curvilinear_step(set, q, d, step)) -
                           field(curvilinear_step(set, q, d, -step))) / (2 * step);
      check(std::abs(rate - g.dot(d)) <= 1e-6 * g.norm() * d.norm(), "curvilinear step rate");
    }
  }

  auto shape = [](ShapeKind k, int n, double spacing) {
    return initial_shape({k, n, spacing, 0.1, kWire}, kLambda).positions;
  };
  const Mat3X ula = shape(ShapeKind::Ula, 100, kLambda / 16);
  check(std::abs(ula.row(1).maxCoeff() - ula.row(1).minCoeff() - 99 * kLambda / 16) <= 1e-15, "ULA span");
  check(std::abs(min_pair_distance(ula) - kLambda / 16) <= 1e-15, "ULA spacing");
  const Mat3X upa = shape(ShapeKind::Upa, 100, kLambda / 2);
  check(std::abs(upa.row(1).maxCoeff() - upa.row(1).minCoeff() - 9 * kLambda / 2) <= 1e-15, "UPA span");
  check(std::abs(min_pair_distance(upa) - kLambda / 2) <= 1e-15, "UPA spacing");
  const Mat3X cyl = shape(ShapeKind::Cylinder, 100, kLambda / 2);
  for (Eigen::Index i = 0; i < cyl.cols(); ++i) {
    check(std::abs(std::hypot(cyl(0, i), cyl(1, i)) - 0.1) <= 1e-15, "cylinder radius");
  }
  check(min_pair_distance(cyl) >= 0.999 * kLambda / 2, "cylinder spacing");
  const Mat3X sph = shape(ShapeKind::Sphere, 100, kLambda / 2);
  for (Eigen::Index i = 0; i < sph.cols(); ++i) check(std::abs(sph.col(i).norm() - 0.1) <= 1e-15, "sphere radius");
  check(min_pair_distance(sph) >= 0.99 * kLambda / 2, "sphere spacing");

  return {failures == 0, failures == 0 ? std::string("projection idempotence and optimality, curvilinear "
                                                     "gradient and step rates, initial-shape spacing")
                                       : fmt("%d checks failed:", failures) + what.str()};
}

Outcome complexity_scaling() {
  Scenario s;
  s.shape = ShapeKind::Upa;
  std::vector<double> seconds;
  const Eigen::Index counts[] = {8, 16, 32, 64};
  for (Eigen::Index n : counts) {
    const DipoleLayout initial = initial_shape(s.shape_spec(n), s.lambda);
    SolverSettings settings = s.solver_settings();
    settings.max_iters = 3;
    settings.epsilon = 1e-300;
    double best = INFINITY;
    for (int rep = 0; rep < 3; ++rep) {
      const auto t0 = std::chrono::steady_clock::now();
      run_joint_optimization(s.link(), initial, s.feasible_set(initial), s.box, settings);
      best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    seconds.push_back(best);
  }
  const double ratio = seconds.back() / seconds.front();
  const double model = std::pow(64.0 / 8.0, 4);
  const double slope = std::log(ratio) / std::log(8.0);
  return {ratio >= model / 3 && ratio <= 3 * model,
          fmt("UPA, 3 outer iterations: T = %.3f, %.3f, %.3f, %.3f s for N = 8..64; T64/T8 = %.1f, "
              "N^4 model %.0f, band [%.0f, %.0f]; log-log slope %.2f",
              seconds[0], seconds[1], seconds[2], seconds[3], ratio, model, model / 3, 3 * model, slope)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / fmt("ris3d_accept_%d", static_cast<int>(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  const std::string base = std::string(RIS3D_CLI_PATH) + " optimize --set initial_shape.count=16 --out ";
  for (const char* run : {"a", "b"}) {
    const std::string cmd = base + (root / run).string() + " > " + (root / (std::string(run) + ".log")).string() + " 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, "optimize invocation failed: " + cmd};
  }
  auto manifest = [&](const char* run) {
    nlohmann::json m = nlohmann::json::parse(slurp(root / run / "manifest.json"));
    m.erase("created_utc");
    m.erase("wall_seconds");
    if (m.contains("summary")) m["summary"].erase("wall_seconds");
    return m;
  };
  const nlohmann::json ma = manifest("a");
  int files = 0;
  std::string mismatch;
  for (const auto& name : ma["outputs"]) {
    const std::string n = name.get<std::string>();
    ++files;
    if (slurp(root / "a" / n) != slurp(root / "b" / n)) mismatch += " " + n;
  }
  if (ma != manifest("b")) mismatch += " manifest.json";
  fs::remove_all(root);
  return {files > 0 && mismatch.empty(),
          mismatch.empty() ? fmt("two UPA N=16 optimize runs: %d artefacts byte-identical; manifest equal "
                                 "apart from created_utc and wall_seconds", files)
                           : "differing:" + mismatch};
}

struct Criterion {
  const char* name;
  double limit_s;  ///< 0 when the criterion carries no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {
      {"kernel_fidelity", 10, kernel_fidelity},
      {"gradient_fidelity", 60, gradient_fidelity},
      {"neumann_remainder", 60, neumann_remainder},
      {"monotone_ascent", 600, monotone_ascent},
      {"baseline_dominance", 300, baseline_dominance},
      {"config_oracle", 120, config_oracle},
      {"geometry_suite", 30, geometry_suite},
      {"complexity_scaling", 900, complexity_scaling},
      {"determinism", 0, determinism},
  };
  std::vector<std::string> wanted(argv + 1, argv + argc);
  int failed = 0, ran = 0;
  for (const Criterion& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.name) == wanted.end()) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.limit_s <= 0 || t < c.limit_s;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::string timing = c.limit_s > 0 ? fmt("%.1f s, limit %.0f s", t, c.limit_s) : fmt("%.1f s", t);
    if (!in_time) timing += ", over time";
    std::printf("%s %s: %s (%s)\n", pass ? "PASS" : "FAIL", c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion matched\n");
    return 2;
  }
  return failed == 0 ? 0 : 1;
}
