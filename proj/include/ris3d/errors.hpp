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

#include <stdexcept>
#include <string>

namespace ris3d {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag used by the CLI error records.
class Error : public std::runtime_error {
public:
  Error(std::string kind, const std::string& what)
      : std::runtime_error(what), kind_(std::move(kind)) {}

  const std::string& kind() const noexcept { return kind_; }

private:
  std::string kind_;
};

#define RIS3D_DEFINE_ERROR(Name, tag)                                          \
  class Name : public Error {                                                  \
  public:                                                                      \
    explicit Name(const std::string& what) : Error(tag, what) {}               \
  };

RIS3D_DEFINE_ERROR(DomainError, "domain")
RIS3D_DEFINE_ERROR(ConvergenceError, "convergence")
RIS3D_DEFINE_ERROR(ColinearError, "colinear")
RIS3D_DEFINE_ERROR(OverlapError, "overlap")
RIS3D_DEFINE_ERROR(SingularMatrixError, "singular-matrix")
RIS3D_DEFINE_ERROR(ApproximationDomainError, "approximation-domain")
RIS3D_DEFINE_ERROR(PoleError, "pole")
RIS3D_DEFINE_ERROR(GeometryError, "geometry")
RIS3D_DEFINE_ERROR(NoCrossingError, "no-crossing")
RIS3D_DEFINE_ERROR(ValidationError, "validation")
RIS3D_DEFINE_ERROR(ConfigNotFoundError, "config-not-found")
RIS3D_DEFINE_ERROR(IoError, "io")

#undef RIS3D_DEFINE_ERROR

/// Parse failure in a configuration or data file, with 1-based position.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, int column)
      : Error("parse", format(what, line, column)), line_(line), column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

private:
  static std::string format(const std::string& what, int line, int column) {
    return "line " + std::to_string(line) + ", column " + std::to_string(column) +
           ": " + what;
  }
  int line_;
  int column_;
};

}  // namespace ris3d
