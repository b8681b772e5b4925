// Copyright 2026 The elastikit Authors
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

#include <elastikit/core/ids.hpp>

#include <gtest/gtest.h>

#include <set>

using namespace elastikit;

TEST(Ids, SixteenBytesAndHex) {
    auto id = CloudObjectId::from_parts(1, 2);
    EXPECT_EQ(id.bytes().size(), 16u);
    EXPECT_EQ(id.hex(), "00000000000000010000000000000002");
    EXPECT_EQ(CloudObjectId::from_hex(id.hex()), id);
    EXPECT_FALSE(CloudObjectId::from_hex("123").has_value());
    EXPECT_TRUE(CloudObjectId{}.is_nil());
}

TEST(Ids, GeneratorNeverRepeatsAndSortsInIssueOrder) {
    IdGenerator gen;
    std::set<CloudHostId> seen;
    CloudHostId prev;
    for (int i = 0; i < 10000; ++i) {
        auto id = gen.next<CloudHostId>();
        ASSERT_TRUE(seen.insert(id).second);
        if (i > 0) ASSERT_LT(prev, id);
        prev = id;
    }
}
