// Copyright 2026 The dpbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpbound/prob_lang.h"
#include "gtest/gtest.h"
#include "properties.h"
#include "test_util.h"

namespace dpbound {
namespace {

constexpr int kInstances = 200;

TEST(PropertyTest, DistributionsAreNormalized) {
  DPB_EXPECT_OK(testing::CheckNormalization(101));
}

TEST(PropertyTest, RandomizedResponseDependsOnlyOnDistance) {
  DPB_EXPECT_OK(testing::CheckDistanceOnly(201, kInstances));
}

TEST(PropertyTest, NeighborsDifferByOneFlip) {
  DPB_EXPECT_OK(testing::CheckNeighborStep(301, kInstances));
}

TEST(PropertyTest, CountingDependsOnlyOnCount) {
  DPB_EXPECT_OK(testing::CheckCountOnly(401, kInstances));
}

TEST(PropertyTest, AccuracyIsMonotoneInAlpha) {
  DPB_EXPECT_OK(testing::CheckAccuracyMonotone(501));
}

TEST(PropertyTest, PrivacyBoundIgnoresTripleOrder) {
  DPB_EXPECT_OK(testing::CheckPrivacyReorder(601));
}

TEST(PropertyTest, ParseRenderRoundTrip) {
  DPB_EXPECT_OK(testing::CheckParseRender(701, 500));
}

TEST(PropertyTest, ValidationIsDeterministic) {
  testing::ProgramGen gen(801);
  for (int i = 0; i < 100; ++i) {
    const Program p = gen.Next(6);
    const ValidatedProgram a = testing::Must(Validate(p));
    const ValidatedProgram b = testing::Must(Validate(p));
    EXPECT_EQ(a.output_type(), b.output_type());
    EXPECT_EQ(a.types.size(), b.types.size());
  }
}

// Other seeds, so the two suites do not replay the same instances.
TEST(PropertyTest, AlternateSeeds) {
  DPB_EXPECT_OK(testing::CheckDistanceOnly(9201, kInstances));
  DPB_EXPECT_OK(testing::CheckNeighborStep(9301, kInstances));
  DPB_EXPECT_OK(testing::CheckCountOnly(9401, kInstances));
  DPB_EXPECT_OK(testing::CheckParseRender(9701, 500));
}

}  // namespace
}  // namespace dpbound
