// Copyright 2026 The qcvv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "gen.hpp"
#include "qcvv/circuit.hpp"

using namespace qcvv;

TEST(CircuitParse, TwoLayerExample) {
  Circuit c = parse_circuit("[Gxpi2:0Gypi2:1][Gcnot:0:1]@(0,1)");
  ASSERT_EQ(c.depth(), 2u);
  EXPECT_EQ(c.lines(), (std::vector<LineLabel>{"0", "1"}));
  ASSERT_EQ(c[0].labels.size(), 2u);
  EXPECT_EQ(c[0].labels[0], (GateLabel{"Gxpi2", {"0"}}));
  EXPECT_EQ(c[0].labels[1], (GateLabel{"Gypi2", {"1"}}));
  EXPECT_EQ(c[1].labels[0], (GateLabel{"Gcnot", {"0", "1"}}));
}

TEST(CircuitParse, EmptyCircuit) {
  Circuit c = parse_circuit("{}@(0)");
  EXPECT_EQ(c.depth(), 0u);
  EXPECT_EQ(c.lines(), (std::vector<LineLabel>{"0"}));
  EXPECT_EQ(c.str(), "{}@(0)");
  EXPECT_EQ(Circuit::empty({"0"}).str(), "{}@(0)");
}

TEST(CircuitParse, LegacyForm) {
  Circuit c = parse_circuit("GxGxGxGy");
  ASSERT_EQ(c.depth(), 4u);
  EXPECT_EQ(c.lines(), (std::vector<LineLabel>{"0"}));
  EXPECT_EQ(c[3].labels[0].name, "Gy");
  EXPECT_EQ(c.str(), "[Gx:0][Gx:0][Gx:0][Gy:0]@(0)");
}

TEST(CircuitParse, FourQubitExampleRoundTripsVerbatim) {
  const std::string s = "[Gxpi2:0Gypi2:1][Gcnot:0:1][Gcnot:1:2][Gxpi2:0Gcnot:2:3]@(0,1,2,3)";
  Circuit c = parse_circuit(s);
  EXPECT_EQ(serialize_circuit(c), s);
  EXPECT_EQ(c.depth(), 4u);
}

TEST(CircuitParse, InfersSortedLines) {
  Circuit c = parse_circuit("[Gx:10][Gy:2][Gz:Q1]");
  EXPECT_EQ(c.lines(), (std::vector<LineLabel>{"2", "10", "Q1"}));
}

TEST(CircuitParse, WhitespaceBetweenLayers) {
  EXPECT_EQ(parse_circuit("[Gx:0] [Gy:0]@(0)"), parse_circuit("[Gx:0][Gy:0]@(0)"));
}

TEST(CircuitParse, SyntaxErrorCarriesOffset) {
  try {
    parse_circuit("[Gx:0][Gy:0");
    FAIL() << "expected a parse error";
  } catch (const CircuitParseError &e) {
    EXPECT_EQ(e.offset(), 11u);
  }
  try {
    parse_circuit("[Gx:0]x");
    FAIL() << "expected a parse error";
  } catch (const CircuitParseError &e) {
    EXPECT_EQ(e.offset(), 6u);
  }
}

TEST(CircuitParse, RejectsDuplicateTargetInLayer) {
  EXPECT_THROW(parse_circuit("[Gx:0Gy:0]@(0)"), CircuitError);
}

TEST(CircuitParse, RejectsTargetOutsideLines) {
  EXPECT_THROW(parse_circuit("[Gx:1]@(0)"), CircuitError);
}

TEST(CircuitParse, RejectsMalformedNames) {
  EXPECT_THROW(parse_circuit("[Hx:0]"), CircuitParseError);
  EXPECT_THROW(parse_circuit("[G:0]"), CircuitParseError);
  EXPECT_THROW(parse_circuit("[GX:0]"), CircuitParseError);
}

TEST(CircuitOps, RepeatAndConcat) {
  Circuit x = parse_circuit("[Gxpi2:0]@(0)");
  EXPECT_EQ(repeat(x, 3).depth(), 3u);
  EXPECT_EQ(repeat(x, 0), Circuit::empty({"0"}));
  EXPECT_EQ(x + Circuit::empty({"0"}), x);
  EXPECT_EQ(Circuit::empty({"0"}) + x, x);
  Circuit y = parse_circuit("[Gypi2:0]@(0)");
  EXPECT_EQ((x + y).str(), "[Gxpi2:0][Gypi2:0]@(0)");
  EXPECT_THROW(x + parse_circuit("[Gx:1]@(1)"), CircuitError);
}

TEST(CircuitOps, LineLabelOrdering) {
  EXPECT_TRUE(line_label_less("2", "10"));
  EXPECT_TRUE(line_label_less("10", "Q0"));
  EXPECT_FALSE(line_label_less("Q1", "Q0"));
}

TEST(CircuitProperty, RoundTripRandomCircuits) {
  testgen::Rng rng(20260101);
  for (int i = 0; i < 1000; ++i) {
    Circuit c = testgen::circuit(rng);
    std::string s = serialize_circuit(c);
    Circuit back = parse_circuit(s);
    ASSERT_EQ(back, c) << s;
    ASSERT_EQ(serialize_circuit(back), s);
  }
}

TEST(CircuitProperty, ConcatIsAssociative) {
  testgen::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    auto lines = testgen::line_set(rng);
    Circuit a = testgen::circuit(rng, lines), b = testgen::circuit(rng, lines),
            c = testgen::circuit(rng, lines);
    ASSERT_EQ((a + b) + c, a + (b + c));
    ASSERT_EQ((a + b).depth(), a.depth() + b.depth());
  }
}
