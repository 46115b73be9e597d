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

#include <complex>

#include <Eigen/Dense>

#include "ris3d/impedance.hpp"
#include "ris3d/types.hpp"

namespace ris3d {

/// Feasible interval for every tunable reactance (ohms).
struct BoxSet {
  double b_min = -5000.0;
  double b_max = 188.0;

  void validate() const;
  double clamp(double b) const { return b < b_min ? b_min : (b > b_max ? b_max : b); }
  Eigen::VectorXd clamp(const Eigen::VectorXd& b) const {
    return b.cwiseMax(b_min).cwiseMin(b_max);
  }
};

/// Tunable loads Z_RIS = diag(R0 + j b_n).
struct RisConfig {
  Eigen::VectorXd b;
  double r0 = 0.0;

  Eigen::VectorXcd loads() const;
  void validate(const BoxSet& box) const;
};

/// Largest accepted condition number of Z_SS + Z_RIS.
inline constexpr double kMaxCondition = 1e12;

/// H = Y0 [Z_RT - z_SR^T (Z_SS + Z_RIS)^{-1} z_ST], by a direct LU solve.
cdouble end_to_end_channel(const ImpedanceSet& imp, const RisConfig& cfg, cdouble y0);

/// 10 log10(P |H|^2 / sigma2) with powers in watts.
double snr_db(cdouble h, double power_w, double noise_w);

/// Immutable snapshot of the channel for one layout and configuration, with
/// the inverse G = (Z_SS + Z_RIS)^{-1} and the products the perturbation
/// formulas reuse. G is symmetrised, as the exact inverse of a symmetric
/// matrix is.
class ChannelState {
public:
  ChannelState(ImpedanceSet impedances, RisConfig config, cdouble y0);

  const ImpedanceSet& impedances() const { return imp_; }
  const RisConfig& config() const { return cfg_; }
  cdouble y0() const { return y0_; }

  const Eigen::MatrixXcd& inverse() const { return g_; }
  const Eigen::VectorXcd& g_st() const { return g_st_; }  ///< G z_ST
  const Eigen::VectorXcd& g_sr() const { return g_sr_; }  ///< G z_SR
  cdouble z_rst() const { return z_rst_; }                ///< H / Y0
  cdouble channel() const { return y0_ * z_rst_; }
  double gain() const { return std::norm(channel()); }    ///< |H|^2
  double condition() const { return condition_; }         ///< 1-norm estimate
  Eigen::Index size() const { return g_.rows(); }

private:
  ImpedanceSet imp_;
  RisConfig cfg_;
  cdouble y0_;
  Eigen::MatrixXcd g_;
  Eigen::VectorXcd g_st_;
  Eigen::VectorXcd g_sr_;
  cdouble z_rst_;
  double condition_ = 1.0;
};

/// Exact recomputation with new impedances or a new configuration.
ChannelState refresh(const ChannelState& state, ImpedanceSet impedances);
ChannelState refresh(const ChannelState& state, RisConfig config);

/// Perturbation of element k: `delta_col` is the change of column k of
/// Z_SS (its k-th entry is the change of the diagonal term), `delta_sr` and
/// `delta_st` the changes of z_SR(k) and z_ST(k).
struct ElementPerturbation {
  Eigen::Index k = 0;
  Eigen::VectorXcd delta_col;
  cdouble delta_sr{};
  cdouble delta_st{};
};

/// Spectral norm of G Delta, where Delta is the symmetric matrix that is
/// non-zero only in row and column k. Delta = U W^T has rank two, so the
/// norm reduces to a 2x2 singular value problem.
double perturbation_norm(const ChannelState& state, Eigen::Index k,
                         const Eigen::VectorXcd& delta_col);

/// Cached vectors of the single-element Neumann expansion around `state`.
///
///   g_rst   = g_ST,k g_SR + g_SR,k g_ST - g_ST,k g_SR,k e_k
///   gt_st   = g_ST,k G_k + G_kk g_ST - g_ST,k G_kk e_k
///   gt_sr   = g_SR,k G_k + G_kk g_SR - g_SR,k G_kk e_k
///   g_bar   = 2 G_kk G_k - G_kk^2 e_k
///
/// with G_k the k-th column of G. All are O(N) given the state.
struct NeumannTerms {
  Eigen::Index k = 0;
  cdouble z_rst{};
  cdouble g_st_k{};
  cdouble g_sr_k{};
  cdouble g_kk{};
  Eigen::VectorXcd g_rst;
  Eigen::VectorXcd gt_st;
  Eigen::VectorXcd gt_sr;
  Eigen::VectorXcd g_bar;

  static NeumannTerms at(const ChannelState& state, Eigen::Index k);

  /// h(delta) from the first-order Neumann expansion of the inverse.
  cdouble evaluate(const Eigen::VectorXcd& delta, cdouble delta_sr, cdouble delta_st) const;

  /// Partial derivatives of `evaluate` with respect to delta_sr, delta_st
  /// and each entry of delta.
  cdouble d_delta_sr(const Eigen::VectorXcd& delta, cdouble delta_st) const;
  cdouble d_delta_st(const Eigen::VectorXcd& delta, cdouble delta_sr) const;
  Eigen::VectorXcd d_delta(cdouble delta_sr, cdouble delta_st) const;
};

/// Neumann approximation of H/Y0 after perturbing element k, using only
/// cached vectors of `state`. Throws ApproximationDomainError when
/// ||G Delta|| exceeds `cap`.
cdouble neumann_perturbed_channel(const ChannelState& state, const ElementPerturbation& p,
                                  double cap = 0.1);

/// Exact H/Y0 after the same perturbation, via the rank-2 Woodbury identity
/// (O(N^2), no refactorisation).
cdouble exact_perturbed_channel(const ChannelState& state, const ElementPerturbation& p);

}  // namespace ris3d
