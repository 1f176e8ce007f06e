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

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace csrank {

using Real = double;
using Complex = std::complex<double>;
using Index = Eigen::Index;

using VectorXc = Eigen::VectorXcd;
using MatrixXc = Eigen::MatrixXcd;
using VectorXr = Eigen::VectorXd;

inline constexpr const char* kVersion = CSRANK_VERSION;

/// Precondition violated by the caller (bad sizes, out-of-range parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that should succeed produced an unusable result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds the sizes this library is prepared to handle exactly.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace csrank
