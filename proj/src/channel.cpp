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

#include "ris3d/channel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ris3d {

void BoxSet::validate() const {
  if (!(b_min < b_max)) throw ValidationError("reactance box requires b_min < b_max");
}

Eigen::VectorXcd RisConfig::loads() const {
  Eigen::VectorXcd z(b.size());
  for (Eigen::Index n = 0; n < b.size(); ++n) z(n) = cdouble(r0, b(n));
  return z;
}

void RisConfig::validate(const BoxSet& box) const {
  if (!(r0 >= 0.0)) throw ValidationError("loss constant R0 must be non-negative");
  for (Eigen::Index n = 0; n < b.size(); ++n) {
    if (!(b(n) >= box.b_min && b(n) <= box.b_max)) {
      throw ValidationError("reactance " + std::to_string(n) + " outside the feasible box");
    }
  }
}

namespace {

Eigen::PartialPivLU<Eigen::MatrixXcd> factorize(const ImpedanceSet& imp, const RisConfig& cfg) {
  if (cfg.b.size() != imp.z_ss.rows() || imp.z_sr.size() != imp.z_ss.rows() ||
      imp.z_st.size() != imp.z_ss.rows()) {
    throw ValidationError("impedance set and configuration sizes disagree");
  }
  Eigen::MatrixXcd a = imp.z_ss;
  a.diagonal() += cfg.loads();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  const double rcond = lu.rcond();
  if (!(rcond * kMaxCondition >= 1.0)) {
    throw SingularMatrixError("Z_SS + Z_RIS is singular to working precision (condition estimate " +
                              std::to_string(rcond > 0.0 ? 1.0 / rcond : INFINITY) + ")");
  }
  return lu;
}

cdouble transpose_dot(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return (a.array() * b.array()).sum();
}

}  // namespace

cdouble end_to_end_channel(const ImpedanceSet& imp, const RisConfig& cfg, cdouble y0) {
  const auto lu = factorize(imp, cfg);
  const Eigen::VectorXcd x = lu.solve(imp.z_st);
  return y0 * (imp.z_rt - transpose_dot(imp.z_sr, x));
}

double snr_db(cdouble h, double power_w, double noise_w) {
  if (!(power_w > 0.0) || !(noise_w > 0.0)) {
    throw DomainError("SNR requires positive transmit and noise powers");
  }
  return 10.0 * std::log10(power_w * std::norm(h) / noise_w);
}

ChannelState::ChannelState(ImpedanceSet impedances, RisConfig config, cdouble y0)
    : imp_(std::move(impedances)), cfg_(std::move(config)), y0_(y0) {
  const auto lu = factorize(imp_, cfg_);
  condition_ = 1.0 / lu.rcond();
  g_ = lu.inverse();
  const Eigen::MatrixXcd gt = g_.transpose();
  g_ = 0.5 * (g_ + gt);
  g_st_ = g_ * imp_.z_st;
  g_sr_ = g_ * imp_.z_sr;
  z_rst_ = imp_.z_rt - transpose_dot(imp_.z_sr, g_st_);
}

ChannelState refresh(const ChannelState& state, ImpedanceSet impedances) {
  return ChannelState(std::move(impedances), state.config(), state.y0());
}

ChannelState refresh(const ChannelState& state, RisConfig config) {
  return ChannelState(state.impedances(), std::move(config), state.y0());
}

namespace {

void check_perturbation(const ChannelState& state, Eigen::Index k,
                        const Eigen::VectorXcd& delta_col) {
  if (k < 0 || k >= state.size()) throw DomainError("element index out of range");
  if (delta_col.size() != state.size()) throw DomainError("perturbation column has wrong size");
}

// Delta with only row/column k non-zero, as U W^T with U = [delta, e_k]
// and W = [e_k, delta'], delta' = delta - delta_k e_k.
Eigen::VectorXcd off_diagonal_part(Eigen::Index k, const Eigen::VectorXcd& delta_col) {
  Eigen::VectorXcd d = delta_col;
  d(k) = 0.0;
  return d;
}

}  // namespace

double perturbation_norm(const ChannelState& state, Eigen::Index k,
                         const Eigen::VectorXcd& delta_col) {
  check_perturbation(state, k, delta_col);
  const Eigen::Index n = state.size();
  Eigen::MatrixXcd u(n, 2);
  u.col(0) = state.inverse() * delta_col;
  u.col(1) = state.inverse().col(k);
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(n, 2);
  w(k, 0) = 1.0;
  w.col(1) = off_diagonal_part(k, delta_col);
  // Non-zero eigenvalues of (U W^T)^H (U W^T) are those of (U^H U)(W^T conj(W)).
  const Eigen::Matrix2cd m = (u.adjoint() * u) * (w.transpose() * w.conjugate());
  const cdouble tr = m.trace();
  const cdouble disc = std::sqrt(tr * tr - 4.0 * m.determinant());
  const double lambda_max = std::max((tr + disc).real(), (tr - disc).real()) / 2.0;
  return std::sqrt(std::max(lambda_max, 0.0));
}

NeumannTerms NeumannTerms::at(const ChannelState& state, Eigen::Index k) {
  if (k < 0 || k >= state.size()) throw DomainError("element index out of range");
  const Eigen::MatrixXcd& g = state.inverse();
  NeumannTerms t;
  t.k = k;
  t.z_rst = state.z_rst();
  t.g_st_k = state.g_st()(k);
  t.g_sr_k = state.g_sr()(k);
  t.g_kk = g(k, k);
  const Eigen::VectorXcd gk = g.col(k);

  t.g_rst = t.g_st_k * state.g_sr() + t.g_sr_k * state.g_st();
  t.g_rst(k) -= t.g_st_k * t.g_sr_k;
  t.gt_st = t.g_st_k * gk + t.g_kk * state.g_st();
  t.gt_st(k) -= t.g_st_k * t.g_kk;
  t.gt_sr = t.g_sr_k * gk + t.g_kk * state.g_sr();
  t.gt_sr(k) -= t.g_sr_k * t.g_kk;
  t.g_bar = 2.0 * t.g_kk * gk;
  t.g_bar(k) -= t.g_kk * t.g_kk;
  return t;
}

cdouble NeumannTerms::evaluate(const Eigen::VectorXcd& delta, cdouble delta_sr,
                               cdouble delta_st) const {
  const cdouble rst = transpose_dot(g_rst, delta);
  const cdouble st = transpose_dot(gt_st, delta);
  const cdouble sr = transpose_dot(gt_sr, delta);
  const cdouble bar = transpose_dot(g_bar, delta);
  return z_rst - delta_sr * g_st_k + rst + delta_sr * st - g_sr_k * delta_st -
         g_kk * delta_sr * delta_st + sr * delta_st + delta_sr * bar * delta_st;
}

cdouble NeumannTerms::d_delta_sr(const Eigen::VectorXcd& delta, cdouble delta_st) const {
  return transpose_dot(gt_st, delta) - g_st_k - g_kk * delta_st +
         transpose_dot(g_bar, delta) * delta_st;
}

cdouble NeumannTerms::d_delta_st(const Eigen::VectorXcd& delta, cdouble delta_sr) const {
  return transpose_dot(gt_sr, delta) - g_sr_k - g_kk * delta_sr +
         delta_sr * transpose_dot(g_bar, delta);
}

Eigen::VectorXcd NeumannTerms::d_delta(cdouble delta_sr, cdouble delta_st) const {
  return g_rst + delta_sr * gt_st + delta_st * gt_sr + (delta_sr * delta_st) * g_bar;
}

cdouble neumann_perturbed_channel(const ChannelState& state, const ElementPerturbation& p,
                                  double cap) {
  check_perturbation(state, p.k, p.delta_col);
  const double norm = perturbation_norm(state, p.k, p.delta_col);
  if (!(norm <= cap)) {
    throw ApproximationDomainError("||G Delta|| = " + std::to_string(norm) +
                                   " exceeds the Neumann cap " + std::to_string(cap));
  }
  return NeumannTerms::at(state, p.k).evaluate(p.delta_col, p.delta_sr, p.delta_st);
}

cdouble exact_perturbed_channel(const ChannelState& state, const ElementPerturbation& p) {
  check_perturbation(state, p.k, p.delta_col);
  const Eigen::MatrixXcd& g = state.inverse();
  const Eigen::Index k = p.k;
  const ImpedanceSet& imp = state.impedances();

  const Eigen::VectorXcd gk = g.col(k);
  const Eigen::VectorXcd g_delta = g * p.delta_col;
  const Eigen::VectorXcd delta_off = off_diagonal_part(k, p.delta_col);
  const Eigen::VectorXcd x = state.g_st() + p.delta_st * gk;  // G z_ST'
  const Eigen::VectorXcd y = state.g_sr() + p.delta_sr * gk;  // G z_SR'

  Eigen::Matrix2cd c;
  c(0, 0) = 1.0 + g_delta(k);
  c(0, 1) = gk(k);
  c(1, 0) = transpose_dot(delta_off, g_delta);
  c(1, 1) = 1.0 + transpose_dot(delta_off, gk);
  const cdouble det = c.determinant();
  if (!(std::abs(det) > 1e-12 * c.cwiseAbs().maxCoeff())) {
    throw SingularMatrixError("rank-2 update makes Z_SS + Z_RIS singular");
  }
  const Eigen::Vector2cd vx(x(k), transpose_dot(delta_off, x));
  const Eigen::RowVector2cd yu(transpose_dot(y, p.delta_col), y(k));

  Eigen::VectorXcd z_sr = imp.z_sr;
  z_sr(k) += p.delta_sr;
  const cdouble correction = yu * c.inverse() * vx;
  return imp.z_rt - transpose_dot(z_sr, x) + correction;
}

}  // namespace ris3d
