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

#include <elastikit/core/error.hpp>
#include <elastikit/core/event.hpp>
#include <elastikit/core/types.hpp>
#include <elastikit/core/value.hpp>

#include <gtest/gtest.h>

#include <cmath>

using namespace elastikit;

TEST(Value, KindsAndAccessors) {
    EXPECT_TRUE(Value().is_null());
    EXPECT_EQ(Value::int64(4).as_int64(), 4);
    EXPECT_EQ(Value::int64(4).as_number(), 4.0);
    EXPECT_EQ(Value::text("x").kind(), Value::Kind::Text);
    try {
        (void)Value::text("x").as_int64();
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TypeMismatch);
    }
}

TEST(Value, FloatEqualityIsBitwise) {
    EXPECT_EQ(Value::float64(std::nan("")), Value::float64(std::nan("")));
    EXPECT_FALSE(Value::float64(0.0) == Value::float64(-0.0));
    EXPECT_FALSE(Value::int64(1) == Value::float64(1.0));
}

TEST(PassingModes, RefsOnlyWhereDeclared) {
    auto ref = Value::ref(CloudObjectId::from_parts(1, 2));
    EXPECT_TRUE(conforms_to(ref, PassingMode::ByReference));
    EXPECT_FALSE(conforms_to(ref, PassingMode::ByValue));
    EXPECT_FALSE(conforms_to(Value::list({ref}), PassingMode::ByValue));
    EXPECT_FALSE(conforms_to(Value::map({{"k", ref}}), PassingMode::ByValue));
    EXPECT_FALSE(conforms_to(Value::int64(1), PassingMode::ByReference));
    EXPECT_TRUE(conforms_to(Value::list({Value::int64(1)}), PassingMode::ByValue));
}

TEST(Descriptor, ResidencyInvariant) {
    CloudObjectDescriptor d;
    d.state = ObjectState::Scheduling;
    EXPECT_TRUE(d.residency_consistent());
    d.state = ObjectState::Deployed;
    EXPECT_FALSE(d.residency_consistent());
    d.resident_on = CloudHostId::from_parts(0, 1);
    EXPECT_TRUE(d.residency_consistent());
    d.state = ObjectState::Destroyed;
    EXPECT_FALSE(d.residency_consistent());
}

TEST(EventTypes, CatalogAndCustom) {
    EXPECT_TRUE(is_valid_event_type("HostOnline"));
    EXPECT_TRUE(is_valid_event_type("ExecutionFailedEvent"));
    EXPECT_TRUE(is_valid_event_type("custom.billing"));
    EXPECT_FALSE(is_valid_event_type("custom."));
    EXPECT_FALSE(is_valid_event_type("Billing"));
}

TEST(EventSource, TextRoundTrip) {
    auto h = EventSource::host(CloudHostId::from_parts(0xab, 0xcd));
    EXPECT_EQ(EventSource::parse(h.to_string()), h);
    EXPECT_EQ(EventSource::parse("manager"), EventSource::manager());
    EXPECT_EQ(EventSource::parse("external"), EventSource::external());
    EXPECT_FALSE(EventSource::parse("host:zz").has_value());
}
