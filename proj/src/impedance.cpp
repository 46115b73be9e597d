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

#include "ris3d/impedance.hpp"

#include <exception>
#include <string>

namespace ris3d {

void DipoleLayout::validate(double lambda) const {
  if (positions.cols() < 1) throw ValidationError("layout must contain at least one element");
  if (!(half_length > 0.0)) throw ValidationError("dipole half-length must be positive");
  if (!(wire_radius > 0.0)) throw ValidationError("wire radius must be positive");
  if (wire_radius > lambda / 100.0) {
    throw ValidationError("wire radius must not exceed lambda/100 (thin-wire model)");
  }
  if (!positions.allFinite()) throw ValidationError("element positions must be finite");
}

namespace {

std::string pair_label(const std::string& a, const std::string& b) {
  return "(" + a + ", " + b + "): ";
}

cdouble checked_pair(const Vec3& q, const Vec3& p, double lambda, double h, double a,
                     const std::string& label) {
  try {
    return pair_impedance<double>(q, p, lambda, h, a);
  } catch (const OverlapError& e) {
    throw OverlapError(label + e.what());
  } catch (const DomainError& e) {
    throw DomainError(label + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(label + e.what());
  }
}

std::string element(Eigen::Index n) { return "element " + std::to_string(n); }

}  // namespace

ImpedanceSet assemble(const DipoleLayout& layout, const Vec3& p_bs, const Vec3& p_ue,
                      double lambda) {
  layout.validate(lambda);
  const Eigen::Index n = layout.size();
  const double h = layout.half_length;
  const double a = layout.wire_radius;

  ImpedanceSet imp;
  imp.z_rt = checked_pair(p_ue, p_bs, lambda, h, a, pair_label("UE", "BS"));
  imp.z_sr.resize(n);
  imp.z_st.resize(n);
  imp.z_ss.resize(n, n);
  const cdouble self = self_impedance<double>(lambda, h, a);

  // Rows are independent; each worker writes only row i and the entries
  // (j, i) with j > i, so the result does not depend on the thread count.
  // Exceptions cannot cross the parallel region: keep the lowest-row one.
  std::exception_ptr failure;
  Eigen::Index failed_row = n;
#pragma omp parallel for schedule(dynamic)
  for (Eigen::Index i = 0; i < n; ++i) {
    try {
      const Vec3 qi = layout.position(i);
      imp.z_sr(i) = checked_pair(qi, p_ue, lambda, h, a, pair_label(element(i), "UE"));
      imp.z_st(i) = checked_pair(qi, p_bs, lambda, h, a, pair_label(element(i), "BS"));
      imp.z_ss(i, i) = self;
      for (Eigen::Index j = i + 1; j < n; ++j) {
        const cdouble z = checked_pair(qi, layout.position(j), lambda, h, a,
                                       pair_label(element(i), element(j)));
        imp.z_ss(i, j) = z;
        imp.z_ss(j, i) = z;
      }
    } catch (...) {
#pragma omp critical(ris3d_assemble_failure)
      if (i < failed_row) {
        failed_row = i;
        failure = std::current_exception();
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return imp;
}

ElementCoupling element_coupling(const DipoleLayout& layout, Eigen::Index k,
                                 const Vec3& position, const Vec3& p_bs, const Vec3& p_ue,
                                 double lambda) {
  const Eigen::Index n = layout.size();
  const double h = layout.half_length;
  const double a = layout.wire_radius;
  ElementCoupling c;
  c.z_sr = checked_pair(position, p_ue, lambda, h, a, pair_label(element(k), "UE"));
  c.z_st = checked_pair(position, p_bs, lambda, h, a, pair_label(element(k), "BS"));
  c.z_ss_column.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    c.z_ss_column(j) = j == k ? self_impedance<double>(lambda, h, a)
                              : checked_pair(position, layout.position(j), lambda, h, a,
                                             pair_label(element(k), element(j)));
  }
  return c;
}

void apply_coupling(ImpedanceSet& imp, Eigen::Index k, const ElementCoupling& c) {
  imp.z_ss.col(k) = c.z_ss_column;
  imp.z_ss.row(k) = c.z_ss_column.transpose();
  imp.z_sr(k) = c.z_sr;
  imp.z_st(k) = c.z_st;
}

}  // namespace ris3d
