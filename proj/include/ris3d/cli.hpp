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

#include <ostream>

namespace ris3d {

inline constexpr const char* kVersion = "0.1.0";

/// Entry point of the `ris3d` command-line tool. Returns the process exit
/// status; module errors are reported as one JSON line in
/// `<out>/error.jsonl` and on `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ris3d
