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

#include "ris3d/shape_optimizer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "ris3d/errors.hpp"

namespace ris3d {

void SolverSettings::validate() const {
  if (!(epsilon > 0.0)) throw ValidationError("solver epsilon must be positive");
  if (max_iters < 1) throw ValidationError("solver max_iters must be at least 1");
  if (!(neumann_cap > 0.0)) throw ValidationError("solver neumann_cap must be positive");
  if (!(alpha_init > 0.0)) throw ValidationError("solver alpha_init must be positive");
  if (!(bisection_tol > 0.0)) throw ValidationError("solver bisection_tol must be positive");
  if (max_halvings < 0) throw ValidationError("solver max_halvings must be non-negative");
  config.validate();
}

ShapeState make_state(const Link& link, DipoleLayout layout, const Eigen::VectorXd& b) {
  layout.validate(link.lambda);
  ImpedanceSet imp = assemble(layout, link.p_bs, link.p_ue, link.lambda);
  ChannelState channel(std::move(imp), RisConfig{b, link.r0}, link.y0);
  return {std::move(layout), std::move(channel)};
}

namespace {

CVec3 pair_gradient(const Vec3& q_k, const Vec3& q_l, const DipoleLayout& layout,
                    double lambda, Eigen::Index k, const std::string& other) {
  try {
    return impedance_gradient(q_k, q_l, lambda, layout.half_length, layout.wire_radius);
  } catch (const ColinearError& e) {
    throw ColinearError("element " + std::to_string(k) + " and " + other + ": " + e.what());
  }
}

}  // namespace

Vec3 position_gradient(const ShapeState& state, Eigen::Index k, const Link& link) {
  const DipoleLayout& layout = state.layout;
  if (k < 0 || k >= layout.size()) throw DomainError("element index out of range");
  const NeumannTerms t = NeumannTerms::at(state.channel, k);
  const Vec3 q_k = layout.position(k);

  // dh = grad(delta_sr) dh/d(delta_sr) + grad(delta_st) dh/d(delta_st)
  //      + sum_l grad(delta_l) dh/d(delta_l), all at zero displacement.
  CVec3 dh = pair_gradient(q_k, link.p_ue, layout, link.lambda, k, "UE") * (-t.g_st_k);
  dh += pair_gradient(q_k, link.p_bs, layout, link.lambda, k, "BS") * (-t.g_sr_k);
  for (Eigen::Index l = 0; l < layout.size(); ++l) {
    if (l == k) continue;
    dh += pair_gradient(q_k, layout.position(l), layout, link.lambda, k,
                        "element " + std::to_string(l)) *
          t.g_rst(l);
  }
  const double scale = 2.0 * std::norm(state.channel.y0());
  return scale * (std::conj(t.z_rst) * dh).real();
}

namespace {

// Components of a local direction that the projection would undo.
Vec3 tangent_part(const FeasibleSet& set, Vec3 d) {
  if (const auto* box = std::get_if<PlanarBox>(&set)) {
    d(box->fixed_axis) = 0.0;
  } else if (std::holds_alternative<SphericalCap>(set) ||
             std::holds_alternative<CylindricalBand>(set)) {
    d(0) = 0.0;
  }
  return d;
}

struct Candidate {
  Vec3 position;
  ElementCoupling coupling;
  double gain = 0.0;
};

ElementPerturbation perturbation_of(const ImpedanceSet& imp, Eigen::Index k,
                                    const ElementCoupling& c) {
  return {k, c.z_ss_column - imp.z_ss.col(k), c.z_sr - imp.z_sr(k), c.z_st - imp.z_st(k)};
}

// Exact state with element k moved; nullopt when the move is singular or
// does not strictly increase the gain.
std::optional<ShapeState> commit(const ShapeState& state, Eigen::Index k, const Candidate& c) {
  ImpedanceSet imp = state.channel.impedances();
  apply_coupling(imp, k, c.coupling);
  DipoleLayout layout = state.layout;
  layout.positions.col(k) = c.position;
  try {
    ChannelState channel(std::move(imp), state.channel.config(), state.channel.y0());
    if (!(channel.gain() > state.channel.gain())) return std::nullopt;
    return ShapeState{std::move(layout), std::move(channel)};
  } catch (const SingularMatrixError&) {
    return std::nullopt;
  }
}

struct ColinearResult {
  ElementUpdate update;
  bool colinear = false;
};

ColinearResult try_update(const ShapeState& state, Eigen::Index k, const FeasibleSet& set,
                          const Link& link, const SolverSettings& settings) {
  ColinearResult out{{state, false, 0.0, 0.0, 0, 0}, false};
  ElementUpdate& u = out.update;
  const Vec3 q = state.layout.position(k);

  Vec3 grad;
  try {
    grad = position_gradient(state, k, link);
  } catch (const ColinearError&) {
    out.colinear = true;
    return out;
  }
  Vec3 local;
  try {
    local = tangent_part(set, rescale_gradient(set, q, grad));
  } catch (const PoleError&) {
    return out;
  }
  const double norm = local.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) return out;
  const Vec3 dir = local / norm;

  const ImpedanceSet& imp = state.channel.impedances();
  const double gain0 = state.channel.gain();
  const cdouble y0 = state.channel.y0();

  auto attempt = [&](double alpha) -> std::optional<Candidate> {
    ++u.trials;
    Vec3 pos;
    try {
      pos = project(set, curvilinear_step(set, q, dir, alpha));
    } catch (const PoleError&) {
      return std::nullopt;
    }
    if (!contains(set, pos) || pos == q) return std::nullopt;
    Candidate c{pos, {}, 0.0};
    try {
      c.coupling = element_coupling(state.layout, k, pos, link.p_bs, link.p_ue, link.lambda);
    } catch (const Error&) {
      return std::nullopt;
    }
    const ElementPerturbation p = perturbation_of(imp, k, c.coupling);
    if (!(perturbation_norm(state.channel, k, p.delta_col) <= settings.neumann_cap)) {
      ++u.neumann_rejections;
      return std::nullopt;
    }
    try {
      c.gain = std::norm(y0 * exact_perturbed_channel(state.channel, p));
    } catch (const SingularMatrixError&) {
      return std::nullopt;
    }
    if (!(c.gain > gain0)) return std::nullopt;
    return c;
  };

  double alpha = settings.alpha_init;
  std::optional<Candidate> best;
  double best_alpha = 0.0;
  for (int halving = 0; halving <= settings.max_halvings; ++halving) {
    best = attempt(alpha);
    if (best) {
      best_alpha = alpha;
      break;
    }
    alpha *= 0.5;
  }
  if (!best) return out;

  if (best_alpha < settings.alpha_init) {
    double lo = best_alpha;
    double hi = std::min(2.0 * best_alpha, settings.alpha_init);
    while (hi - lo > settings.bisection_tol) {
      const double mid = 0.5 * (lo + hi);
      if (auto c = attempt(mid)) {
        lo = mid;
        best = std::move(c);
      } else {
        hi = mid;
      }
    }
    best_alpha = lo;
  }

  if (auto next = commit(state, k, *best)) {
    u.state = std::move(*next);
    u.accepted = true;
    u.step = best_alpha;
    u.displacement = (best->position - q).norm();
  }
  return out;
}

// Nudges a co-linear element sideways by one wire radius. Candidates are
// +/-a e1 then +/-a e2 (projected); the best one that does not lower the
// gain and clears the co-linearity is kept.
std::optional<ShapeState> resolve_colinear(const ShapeState& state, Eigen::Index k,
                                           const FeasibleSet& set, const Link& link) {
  const Vec3 q = state.layout.position(k);
  const double a = state.layout.wire_radius;
  const Vec3 offsets[] = {a * Vec3::UnitX(), -a * Vec3::UnitX(), a * Vec3::UnitY(),
                          -a * Vec3::UnitY()};
  const ImpedanceSet& imp = state.channel.impedances();
  std::vector<Candidate> candidates;
  for (const Vec3& off : offsets) {
    const Vec3 pos = project(set, q + off);
    if (pos == q) continue;
    Candidate c{pos, {}, 0.0};
    try {
      c.coupling = element_coupling(state.layout, k, pos, link.p_bs, link.p_ue, link.lambda);
      c.gain = std::norm(state.channel.y0() *
                         exact_perturbed_channel(state.channel, perturbation_of(imp, k, c.coupling)));
    } catch (const Error&) {
      continue;
    }
    if (c.gain >= state.channel.gain()) candidates.push_back(std::move(c));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.gain > y.gain; });
  for (const Candidate& c : candidates) {
    ImpedanceSet moved = imp;
    apply_coupling(moved, k, c.coupling);
    DipoleLayout layout = state.layout;
    layout.positions.col(k) = c.position;
    try {
      ShapeState next{layout, ChannelState(std::move(moved), state.channel.config(),
                                           state.channel.y0())};
      if (next.channel.gain() < state.channel.gain()) continue;
      position_gradient(next, k, link);
      return next;
    } catch (const Error&) {
      continue;
    }
  }
  return std::nullopt;
}

}  // namespace

ElementUpdate update_element(const ShapeState& state, Eigen::Index k, const FeasibleSet& set,
                             const Link& link, const SolverSettings& settings) {
  if (k < 0 || k >= state.layout.size()) throw DomainError("element index out of range");
  return try_update(state, k, set, link, settings).update;
}

JointResult run_joint_optimization(const Link& link, const DipoleLayout& initial,
                                   const FeasibleSet& set, const BoxSet& box,
                                   const SolverSettings& settings) {
  const auto started = std::chrono::steady_clock::now();
  settings.validate();
  box.validate();
  validate(set);

  DipoleLayout layout = initial;
  for (Eigen::Index n = 0; n < layout.size(); ++n) {
    layout.positions.col(n) = project(set, layout.position(n));
  }
  const Eigen::Index count = layout.size();
  JointResult result{make_state(link, std::move(layout), Eigen::VectorXd::Zero(count)), {}, 0.0,
                     0.0, false};
  ShapeState& st = result.state;

  TraceRow first;
  first.snr_db = link.snr_db(st.channel.channel());
  result.initial_snr_db = first.snr_db;
  result.trace.rows.push_back(first);

  double previous = st.channel.gain();
  for (int iter = 1; iter <= settings.max_iters; ++iter) {
    TraceRow row;
    row.iter = iter;
    const ConfigResult cr = optimize_config(st.channel, box, settings.config);
    st.channel = cr.state;
    row.config_iters = cr.iterations;
    if (iter == 1) result.config_only_snr_db = link.snr_db(st.channel.channel());

    if (settings.optimize_positions) {
      row.steps.assign(static_cast<std::size_t>(count), 0.0);
      row.displacements.assign(static_cast<std::size_t>(count), 0.0);
      for (Eigen::Index k = 0; k < count; ++k) {
        ColinearResult r = try_update(st, k, set, link, settings);
        if (r.colinear) {
          ++row.colinear_incidents;
          auto nudged = resolve_colinear(st, k, set, link);
          if (!nudged) {
            ++row.colinear_skips;
            ++row.rejected;
            continue;
          }
          const Vec3 before = st.layout.position(k);
          st = std::move(*nudged);
          r = try_update(st, k, set, link, settings);
          if (!r.update.accepted) {
            row.displacements[k] = (st.layout.position(k) - before).norm();
          } else {
            r.update.displacement = (r.update.state.layout.position(k) - before).norm();
          }
        }
        row.neumann_rejections += r.update.neumann_rejections;
        if (r.update.accepted) {
          ++row.accepted;
          row.steps[k] = r.update.step;
          row.displacements[k] = r.update.displacement;
          st = std::move(r.update.state);
        } else {
          ++row.rejected;
        }
      }
      double step_sum = 0.0;
      for (std::size_t k = 0; k < row.steps.size(); ++k) {
        step_sum += row.steps[k];
        row.max_displacement = std::max(row.max_displacement, row.displacements[k]);
      }
      row.mean_step = row.accepted > 0 ? step_sum / row.accepted : 0.0;
    }

    const double gain = st.channel.gain();
    row.snr_db = link.snr_db(st.channel.channel());
    result.trace.rows.push_back(std::move(row));
    const double improvement = (gain - previous) / previous;
    previous = gain;
    if (improvement <= settings.epsilon) {
      result.converged = true;
      break;
    }
  }

  result.trace.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace ris3d
