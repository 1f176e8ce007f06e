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
/// \file io.hpp
///
/// JSON state descriptors.
///
///   {"type":"fock","n":N}
///   {"type":"core","amps":[[re,im],...]}
///   {"type":"squeezed","r":R,"phi":PHI}
///   {"type":"superposition","terms":[{"c":[re,im],"alpha":[re,im]},...]}
///
/// each with an optional "cutoff". Multimode core states use
///   {"modes":m,"amps":[{"occ":[n1,...,nm],"c":[re,im]},...]}
///
#pragma once

#include <nlohmann/json.hpp>

#include "csrank/fock.hpp"
#include "csrank/multimode.hpp"

namespace csrank {

/// Cutoff floor for infinite-support descriptors (squeezed, superposition).
inline constexpr Index kMinInfiniteCutoff = 40;

nlohmann::json complex_to_json(Complex z);
/// Accepts [re, im] or a bare number.
Complex complex_from_json(const nlohmann::json& j);

///
/// Copy of the descriptor with "cutoff" filled in. Finite-support states
/// default to twice their highest Fock number; infinite-support states to the
/// smallest cutoff with tail weight <= 1e-12 (at least kMinInfiniteCutoff).
///
/// \throws InvalidArgument for malformed descriptors.
nlohmann::json resolve_descriptor(const nlohmann::json& j);

/// Normalized state described by `j` (the cutoff is resolved first).
FockVector state_from_json(const nlohmann::json& j);

/// Coefficients rescaled so the (untruncated) superposition has unit norm.
CoherentSuperposition normalized_superposition(const CoherentSuperposition& sup);

CoherentSuperposition superposition_from_json(const nlohmann::json& terms);
nlohmann::json to_json(const CoherentSuperposition& sup);
nlohmann::json to_json(const MultimodeSuperposition& sup);

MultimodeFockState multimode_from_json(const nlohmann::json& j);
nlohmann::json to_json(const MultimodeFockState& state);

nlohmann::json fock_vector_to_json(const FockVector& v);

}  // namespace csrank
