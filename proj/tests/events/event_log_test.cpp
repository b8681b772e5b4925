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

#include "support/generators.hpp"

#include <elastikit/core/error.hpp>
#include <elastikit/events/event_log.hpp>

#include <gtest/gtest.h>

#include <sstream>

using namespace elastikit;
using namespace elastikit::events;

TEST(EventLog, GoldenLineHasSortedKeys) {
    MonitoringEvent e{"ExecutionFinished", 1200, EventSource::host(CloudHostId::from_parts(0, 0xab)),
                      {{"duration", Value::int64(7)}, {"avg", Value::float64(4.0)}, {"blob", Value::bytes({1, 255})}}};
    EXPECT_EQ(to_json_line(e),
              R"({"props":{"avg":4.0,"blob":{"$bytes":"01ff"},"duration":7},)"
              R"("source":"host:000000000000000000000000000000ab","ts":1200,"type":"ExecutionFinished"})");
}

TEST(EventLogProperty, RoundTrip) {
    testkit::Gen g(5150);
    for (int i = 0; i < 500; ++i) {
        auto e = g.event();
        e.timestamp = g.int_in(0, 1'000'000);
        auto back = from_json_line(to_json_line(e));
        ASSERT_EQ(back, e) << to_json_line(e);
    }
}

TEST(EventLog, ReadLogSkipsBlankLinesAndReportsBadOnes) {
    std::istringstream ok("\n" + to_json_line({"HostOnline", 1, {}, {}}) + "\n\n");
    EXPECT_EQ(read_log(ok).size(), 1u);
    std::istringstream empty("");
    EXPECT_TRUE(read_log(empty).empty());
    for (auto bad : {"{", "[]", R"({"props":{},"source":"manager","ts":"x","type":"A"})",
                     R"({"props":{},"source":"nowhere","ts":1,"type":"A"})", R"({"source":"manager","ts":1})"}) {
        std::istringstream in(bad);
        try {
            read_log(in);
            FAIL() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::MalformedLog);
        }
    }
}
