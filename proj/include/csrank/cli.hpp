/**
 * Copyright 2026 The csrank Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */


///
/// \file cli.hpp
///
/// Command-line front end. Commands run in-process so tests can drive them
/// with captured streams.
///
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace csrank {

/// Process exit codes.
enum ExitCode : int {
  kExitSuccess = 0,
  kExitUsage = 2,
  kExitNumerical = 3,
  kExitResource = 4,
};

///
/// Runs one command. `args` excludes the program name, e.g.
/// {"bound", "{\"type\":\"fock\",\"n\":1}", "--r", "1"}. Results go to `out`
/// (or to the --out file), diagnostics to `err`.
///
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace csrank
