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

#include <cmath>

#include <gtest/gtest.h>

#include "csrank/io.hpp"

namespace csrank {
namespace {

using nlohmann::json;

TEST(Descriptor, FockDefaultsToTwiceN) {
  const json d = resolve_descriptor(json::parse(R"({"type":"fock","n":3})"));
  EXPECT_EQ(d.at("cutoff"), 6);
  const FockVector v = state_from_json(d);
  EXPECT_EQ(v.cutoff(), 6);
  EXPECT_EQ(v[3], Complex(1.0));
}

TEST(Descriptor, ExplicitCutoffIsKept) {
  const FockVector v = state_from_json(json::parse(R"({"type":"fock","n":2,"cutoff":9})"));
  EXPECT_EQ(v.cutoff(), 9);
  EXPECT_THROW(state_from_json(json::parse(R"({"type":"fock","n":4,"cutoff":3})")),
               InvalidArgument);
}

TEST(Descriptor, CoreIsNormalized) {
  const FockVector v = state_from_json(json::parse(R"({"type":"core","amps":[[1,0],[0,1],2]})"));
  EXPECT_EQ(v.cutoff(), 4);
  EXPECT_NEAR(v.norm(), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(v[1] - Complex(0.0, 1.0 / std::sqrt(6.0))), 0.0, 1e-15);
}

TEST(Descriptor, SqueezedMeetsTailTolerance) {
  const json d = resolve_descriptor(json::parse(R"({"type":"squeezed","r":1.0,"phi":0.5})"));
  const FockVector v = state_from_json(d);
  EXPECT_GE(v.cutoff(), kMinInfiniteCutoff);
  EXPECT_LE(v.tail_weight(), 1e-12);
}

TEST(Descriptor, SuperpositionIsNormalizedExactly) {
  const json d = json::parse(
      R"({"type":"superposition","terms":[{"c":[1,0],"alpha":[0.1,0]},{"c":[1,0],"alpha":[-0.1,0]}]})");
  const FockVector v = state_from_json(d);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  const CoherentSuperposition s = normalized_superposition(superposition_from_json(d.at("terms")));
  Real n2 = 0.0;
  for (const auto& a : s.terms())
    for (const auto& b : s.terms())
      n2 += (std::conj(a.c) * b.c *
             std::exp(-0.5 * std::norm(a.alpha) - 0.5 * std::norm(b.alpha) +
                      std::conj(a.alpha) * b.alpha))
                .real();
  EXPECT_NEAR(n2, 1.0, 1e-14);
}

TEST(Descriptor, MalformedInputsAreRejected) {
  for (const char* text :
       {R"([1,2])", R"({"n":1})", R"({"type":"fock"})", R"({"type":"fock","n":-1})",
        R"({"type":"fock","n":1.5})", R"({"type":"wigner"})", R"({"type":"core","amps":[]})",
        R"({"type":"core","amps":[[1,2,3]]})", R"({"type":"squeezed","r":-1,"phi":0})",
        R"({"type":"superposition","terms":[{"c":[1,0]}]})"}) {
    EXPECT_THROW(resolve_descriptor(json::parse(text)), InvalidArgument) << text;
  }
  EXPECT_THROW(state_from_json(json::parse(R"({"type":"core","amps":[0,0]})")), InvalidArgument);
  EXPECT_THROW(resolve_descriptor(json::parse(R"({"type":"fock","n":1,"cutoff":1000000000})")),
               ResourceLimit);
}

TEST(ComplexJson, AcceptsPairsAndNumbers) {
  EXPECT_EQ(complex_from_json(json::parse("[1.5,-2]")), Complex(1.5, -2.0));
  EXPECT_EQ(complex_from_json(json::parse("3")), Complex(3.0, 0.0));
  EXPECT_THROW(complex_from_json(json::parse("\"x\"")), InvalidArgument);
  EXPECT_EQ(complex_to_json(Complex(1.0, 2.0)), json::parse("[1.0,2.0]"));
}

TEST(SuperpositionJson, RoundTrip) {
  const CoherentSuperposition s({{Complex(0.5, -0.25), Complex(1.0, 2.0)}, {1.0, -0.5}});
  const json j = to_json(s);
  const CoherentSuperposition back = superposition_from_json(j.at("terms"));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back.terms()[0].c, s.terms()[0].c);
  EXPECT_EQ(back.terms()[1].alpha, s.terms()[1].alpha);
}

TEST(MultimodeJson, RoundTripAndNormalization) {
  const MultimodeFockState s =
      multimode_from_json(json::parse(R"({"modes":2,"amps":[{"occ":[1,1],"c":[2,0]}]})"));
  EXPECT_NEAR(s.squared_norm(), 1.0, 1e-15);
  EXPECT_EQ(s.max_total(), 2);
  const MultimodeFockState back = multimode_from_json(to_json(s));
  EXPECT_EQ(back.amplitudes(), s.amplitudes());
  EXPECT_THROW(multimode_from_json(json::parse(R"({"modes":2,"amps":[{"occ":[1],"c":1}]})")),
               InvalidArgument);
  EXPECT_THROW(multimode_from_json(json::parse(R"({"modes":0,"amps":[]})")), InvalidArgument);
}

}  // namespace
}  // namespace csrank
