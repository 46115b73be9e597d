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

#include "ris3d/config_optimizer.hpp"

#include <cmath>
#include <optional>
#include <utility>

#include "ris3d/errors.hpp"

namespace ris3d {

void ConfigSettings::validate() const {
  if (max_iters < 1) throw ValidationError("config max_iters must be at least 1");
  if (!(tol > 0.0)) throw ValidationError("config tol must be positive");
  if (!(step_tol > 0.0)) throw ValidationError("config step_tol must be positive");
  if (!(initial_step > 0.0)) throw ValidationError("config initial_step must be positive");
  if (!(shrink > 0.0 && shrink < 1.0)) throw ValidationError("config shrink must lie in (0, 1)");
  if (!(sufficient_increase > 0.0 && sufficient_increase < 1.0)) {
    throw ValidationError("config sufficient_increase must lie in (0, 1)");
  }
}

namespace {

Eigen::VectorXd gain_gradient(cdouble h, cdouble y0, const Eigen::VectorXcd& g_sr,
                              const Eigen::VectorXcd& g_st) {
  const cdouble c = std::conj(h) * cdouble(0.0, 1.0) * y0;
  return 2.0 * (c * g_sr.cwiseProduct(g_st)).real();
}

struct Point {
  Eigen::VectorXd b;
  double gain = 0.0;
  Eigen::VectorXd grad;
};

// One LU per trial point; no explicit inverse.
std::optional<Point> evaluate(const ImpedanceSet& imp, const Eigen::VectorXd& b, double r0,
                              cdouble y0) {
  Eigen::MatrixXcd a = imp.z_ss;
  for (Eigen::Index n = 0; n < b.size(); ++n) a(n, n) += cdouble(r0, b(n));
  const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  if (!(lu.rcond() * kMaxCondition >= 1.0)) return std::nullopt;
  const Eigen::VectorXcd g_st = lu.solve(imp.z_st);
  const Eigen::VectorXcd g_sr = lu.solve(imp.z_sr);
  const cdouble h = y0 * (imp.z_rt - (imp.z_sr.array() * g_st.array()).sum());
  Point p{b, std::norm(h), gain_gradient(h, y0, g_sr, g_st)};
  if (!std::isfinite(p.gain) || !p.grad.allFinite()) return std::nullopt;
  return p;
}

}  // namespace

Eigen::VectorXd config_gradient(const ChannelState& state) {
  return gain_gradient(state.channel(), state.y0(), state.g_sr(), state.g_st());
}

ConfigResult optimize_config(const ChannelState& state, const BoxSet& box,
                             const ConfigSettings& settings) {
  box.validate();
  settings.validate();
  const ImpedanceSet& imp = state.impedances();
  const double r0 = state.config().r0;
  const cdouble y0 = state.y0();
  const double width = box.b_max - box.b_min;
  const double min_step = 1e-13 * width;

  auto start = evaluate(imp, box.clamp(state.config().b), r0, y0);
  if (!start) {
    throw SingularMatrixError("starting configuration makes Z_SS + Z_RIS singular");
  }
  Point cur = std::move(*start);
  ConfigResult result{state, {cur.gain}, 0, false};

  double step = settings.initial_step;
  for (int it = 0; it < settings.max_iters; ++it) {
    const double scale = cur.grad.cwiseAbs().maxCoeff();
    if (!(scale > 0.0)) {
      result.converged = true;
      break;
    }
    const Eigen::VectorXd dir = cur.grad / scale;

    std::optional<Point> next;
    bool backtracked = false;
    bool stalled = false;
    while (true) {
      const Eigen::VectorXd b_new = box.clamp(cur.b + step * dir);
      const Eigen::VectorXd move = b_new - cur.b;
      const double slope = cur.grad.dot(move);
      if (move.cwiseAbs().maxCoeff() == 0.0 || !(slope > 0.0)) {
        stalled = true;  // projected gradient vanishes
        break;
      }
      auto trial = evaluate(imp, b_new, r0, y0);
      if (trial && trial->gain > cur.gain &&
          trial->gain >= cur.gain + settings.sufficient_increase * slope) {
        next = std::move(trial);
        break;
      }
      step *= settings.shrink;
      backtracked = true;
      if (step < min_step) {
        stalled = true;
        break;
      }
    }
    if (stalled) {
      result.converged = true;
      break;
    }

    const double rel_gain = (next->gain - cur.gain) / cur.gain;
    const double moved = (next->b - cur.b).cwiseAbs().maxCoeff();
    cur = std::move(*next);
    result.objective.push_back(cur.gain);
    result.iterations = it + 1;
    if (!backtracked) step = std::min(2.0 * step, width);
    if (rel_gain <= settings.tol && moved <= settings.step_tol) {
      result.converged = true;
      break;
    }
  }

  RisConfig cfg = state.config();
  cfg.b = cur.b;
  result.state = refresh(state, std::move(cfg));
  return result;
}

}  // namespace ris3d
