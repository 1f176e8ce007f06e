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

#include "csrank/io.hpp"

#include <cmath>
#include <string>

namespace csrank {

using nlohmann::json;

namespace {

/// Explicit cutoffs above this are refused rather than allocated.
constexpr Index kMaxCutoff = 100000;

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw InvalidArgument(std::string("descriptor: missing field \"") + key + "\"");
  return j.at(key);
}

Real real_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw InvalidArgument(std::string("descriptor: \"") + key + "\" must be a number");
  const Real x = v.get<Real>();
  if (!std::isfinite(x)) throw InvalidArgument(std::string("descriptor: \"") + key + "\" must be finite");
  return x;
}

Index index_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw InvalidArgument(std::string("descriptor: \"") + key +
                          "\" must be a non-negative integer");
  return static_cast<Index>(v.get<long long>());
}

const json& array_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_array() || v.empty())
    throw InvalidArgument(std::string("descriptor: \"") + key + "\" must be a non-empty array");
  return v;
}

std::string type_of(const json& j) {
  const json& t = field(j, "type");
  if (!t.is_string()) throw InvalidArgument("descriptor: \"type\" must be a string");
  return t.get<std::string>();
}

Complex overlap(Complex a, Complex b) {
  return std::exp(-0.5 * std::norm(a) - 0.5 * std::norm(b) + std::conj(a) * b);
}

}  // namespace

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  Complex z;
  if (j.is_number()) {
    z = {j.get<Real>(), 0.0};
  } else if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    z = {j[0].get<Real>(), j[1].get<Real>()};
  } else {
    throw InvalidArgument("expected a complex number as [re, im] or a number");
  }
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw InvalidArgument("complex number must be finite");
  return z;
}

CoherentSuperposition superposition_from_json(const json& terms) {
  if (!terms.is_array() || terms.empty())
    throw InvalidArgument("superposition: \"terms\" must be a non-empty array");
  std::vector<CoherentTerm> out;
  for (const auto& t : terms)
    out.push_back({complex_from_json(field(t, "c")), complex_from_json(field(t, "alpha"))});
  return CoherentSuperposition(std::move(out));
}

json to_json(const CoherentSuperposition& sup) {
  json terms = json::array();
  for (const auto& t : sup.terms())
    terms.push_back({{"c", complex_to_json(t.c)}, {"alpha", complex_to_json(t.alpha)}});
  return {{"type", "superposition"}, {"terms", terms}};
}

json to_json(const MultimodeSuperposition& sup) {
  json terms = json::array();
  for (const auto& t : sup.terms()) {
    json alpha = json::array();
    for (Index k = 0; k < t.alpha.size(); ++k) alpha.push_back(complex_to_json(t.alpha(k)));
    terms.push_back({{"c", complex_to_json(t.c)}, {"alpha", alpha}});
  }
  return {{"modes", sup.modes()}, {"terms", terms}};
}

CoherentSuperposition normalized_superposition(const CoherentSuperposition& sup) {
  Real n2 = 0.0;
  for (const auto& a : sup.terms())
    for (const auto& b : sup.terms())
      n2 += (std::conj(a.c) * b.c * overlap(a.alpha, b.alpha)).real();
  if (!(n2 > 0.0)) throw InvalidArgument("superposition has zero norm");
  const Real s = 1.0 / std::sqrt(n2);
  std::vector<CoherentTerm> terms;
  for (const auto& t : sup.terms()) terms.push_back({t.c * s, t.alpha});
  return CoherentSuperposition(std::move(terms));
}

json resolve_descriptor(const json& j) {
  if (!j.is_object()) throw InvalidArgument("descriptor must be a JSON object");
  json out = j;
  const std::string type = type_of(j);
  Index minimal = 0;
  Index fallback = 0;
  if (type == "fock") {
    const Index n = index_field(j, "n");
    minimal = n;
    fallback = 2 * n;
  } else if (type == "core") {
    const json& amps = array_field(j, "amps");
    for (const auto& a : amps) (void)complex_from_json(a);
    minimal = static_cast<Index>(amps.size()) - 1;
    fallback = 2 * minimal;
  } else if (type == "squeezed") {
    const Real r = real_field(j, "r");
    const Real phi = real_field(j, "phi");
    if (r < 0.0) throw InvalidArgument("squeezed: r must be non-negative");
    fallback = std::max(kMinInfiniteCutoff, squeezed_cutoff(SqueezedParams(r, phi)));
  } else if (type == "superposition") {
    const auto sup = superposition_from_json(field(j, "terms"));
    Index c = kMinInfiniteCutoff;
    for (const auto& t : sup.terms()) c = std::max(c, coherent_cutoff(t.alpha));
    fallback = c;
  } else {
    throw InvalidArgument("descriptor: unknown type \"" + type + "\"");
  }
  if (j.contains("cutoff")) {
    const Index c = index_field(j, "cutoff");
    if (c < minimal) throw InvalidArgument("descriptor: cutoff drops stored amplitudes");
    if (c > kMaxCutoff) throw ResourceLimit("descriptor: cutoff too large");
  } else {
    out["cutoff"] = fallback;
  }
  return out;
}

FockVector state_from_json(const json& j) {
  const json d = resolve_descriptor(j);
  const std::string type = type_of(d);
  const Index cutoff = index_field(d, "cutoff");
  if (type == "fock") return fock_state(index_field(d, "n"), cutoff);
  if (type == "core") {
    const json& amps = d.at("amps");
    VectorXc v = VectorXc::Zero(cutoff + 1);
    for (std::size_t k = 0; k < amps.size(); ++k)
      v(static_cast<Index>(k)) = complex_from_json(amps[k]);
    if (v.norm() == 0.0) throw InvalidArgument("core: zero amplitude vector");
    return FockVector(v).normalized_copy();
  }
  if (type == "squeezed")
    return squeezed_state(SqueezedParams(real_field(d, "r"), real_field(d, "phi")), cutoff);
  return superposition_to_fock(normalized_superposition(superposition_from_json(d.at("terms"))),
                               cutoff);
}

MultimodeFockState multimode_from_json(const json& j) {
  if (!j.is_object()) throw InvalidArgument("multimode state must be a JSON object");
  const Index modes = index_field(j, "modes");
  if (modes < 1) throw InvalidArgument("multimode: \"modes\" must be positive");
  MultimodeFockState::AmplitudeMap amps;
  for (const auto& a : array_field(j, "amps")) {
    const json& occ = field(a, "occ");
    if (!occ.is_array()) throw InvalidArgument("multimode: \"occ\" must be an array");
    Occupation o;
    for (const auto& k : occ) {
      if (!k.is_number_integer()) throw InvalidArgument("multimode: occupations must be integers");
      o.push_back(k.get<int>());
    }
    amps[o] += complex_from_json(field(a, "c"));
  }
  // Descriptors need not be normalized.
  Real n2 = 0.0;
  for (const auto& [o, c] : amps) n2 += std::norm(c);
  if (!(n2 > 0.0)) throw InvalidArgument("multimode: zero state");
  for (auto& [o, c] : amps) c /= std::sqrt(n2);
  return MultimodeFockState(static_cast<int>(modes), std::move(amps));
}

json to_json(const MultimodeFockState& state) {
  json amps = json::array();
  for (const auto& [occ, c] : state.amplitudes())
    amps.push_back({{"occ", occ}, {"c", complex_to_json(c)}});
  return {{"modes", state.modes()}, {"amps", amps}};
}

json fock_vector_to_json(const FockVector& v) {
  json amps = json::array();
  for (Index n = 0; n < v.amplitudes().size(); ++n) amps.push_back(complex_to_json(v[n]));
  return {{"type", "core"}, {"amps", amps}};
}

}  // namespace csrank
