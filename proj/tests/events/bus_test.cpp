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

#include <elastikit/core/clock.hpp>
#include <elastikit/events/bus.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace elastikit;
using namespace elastikit::events;

TEST(EventBus, SubscriberSeesEmittedEvent) {
    VirtualClock clock;
    clock.set(42);
    MetricEngine engine;
    EventBus bus(clock, engine);
    EventRecorder rec(bus);
    MonitoringEvent e{"HostOnline", 0, EventSource::host(CloudHostId::from_parts(0, 1)), {{"k", Value::int64(1)}}};
    ASSERT_TRUE(bus.emit(e));
    bus.flush();
    auto seen = rec.events();
    ASSERT_EQ(seen.size(), 1u);
    e.timestamp = 42;// stamped at intake
    EXPECT_EQ(seen[0], e);
}

TEST(EventBus, TenThousandEventsInOrderPerSource) {
    SteadyClock clock;
    MetricEngine engine;
    EventBus bus(clock, engine);
    EventRecorder rec(bus);
    std::vector<std::thread> producers;
    for (int p = 0; p < 4; ++p) {
        producers.emplace_back([&, p] {
            auto src = EventSource::object(CloudObjectId::from_parts(0, static_cast<std::uint64_t>(p)));
            for (int i = 0; i < 2500; ++i) bus.emit({"custom.seq", 0, src, {{"i", Value::int64(i)}}});
        });
    }
    for (auto& t : producers) t.join();
    bus.flush();
    auto seen = rec.events();
    ASSERT_EQ(seen.size(), 10'000u);
    std::map<EventSource, std::int64_t> next;
    std::int64_t last_ts = 0;
    for (auto const& e : seen) {
        ASSERT_EQ(e.property("i")->as_int64(), next[e.source]++);
        ASSERT_GE(e.timestamp, last_ts);
        last_ts = e.timestamp;
    }
}

TEST(EventBus, CustomEventFeedsMetric) {
    VirtualClock clock;
    MetricEngine engine;
    engine.register_metric({"billing", MetricType::Int64,
                            MetricStatement::parse("SELECT sum(total_ms) FROM custom.billing WINDOW time_batch(1000)")},
                           0);
    EventBus bus(clock, engine);
    bus.emit({"custom.billing", 0, EventSource::external(), {{"total_ms", Value::int64(70)}}});
    clock.set(1000);
    bus.tick();
    bus.flush();
    EXPECT_EQ(engine.query("billing")->value, Value::int64(70));
}

TEST(EventBus, OverflowDropsIncomingAndReportsOncePerSecond) {
    VirtualClock clock;
    MetricEngine engine;
    EventBus bus(clock, engine, 4);
    EventRecorder rec(bus);
    bus.pause();
    int accepted = 0;
    for (int i = 0; i < 10; ++i) accepted += bus.emit({"custom.x", 0, {}, {{"i", Value::int64(i)}}}) ? 1 : 0;
    clock.set(1500);
    accepted += bus.emit({"custom.x", 0, {}, {}}) ? 1 : 0;
    EXPECT_EQ(accepted, 4);
    EXPECT_EQ(bus.dropped(), 7u);
    bus.resume();
    bus.flush();
    EXPECT_EQ(rec.count("custom.x"), 4u);
    auto drops = rec.of_type("DropEvent");
    ASSERT_EQ(drops.size(), 2u);// t=0 and t=1500, not one per dropped event
    EXPECT_EQ(drops[0].property("dropped")->as_int64(), 1);
    EXPECT_EQ(drops[1].timestamp, 1500);
}
