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

#ifndef ELASTIKIT_EVENTS_STATEMENT_HPP
#define ELASTIKIT_EVENTS_STATEMENT_HPP

#include <elastikit/core/event.hpp>
#include <elastikit/core/value.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace elastikit::events {

enum class Aggregate : std::uint8_t { Avg, Sum, Count, Min, Max };
enum class Comparison : std::uint8_t { Eq, Ne, Lt, Le, Gt, Ge };
enum class MetricType : std::uint8_t { Int64, Float64 };

std::string_view to_string(Aggregate a) noexcept;
std::string_view to_string(Comparison c) noexcept;
std::string_view to_string(MetricType t) noexcept;

struct WindowSpec {
    enum class Kind : std::uint8_t { TimeBatch, Sliding };
    Kind kind = Kind::TimeBatch;
    std::int64_t duration_ms = 0;

    friend bool operator==(const WindowSpec&, const WindowSpec&) = default;
};

struct Filter {
    std::string property;
    Comparison cmp = Comparison::Eq;
    Value literal;

    /// Missing properties never match. Numbers compare numerically across
    /// Int64/Float64; Text compares bytewise; other kinds only support
    /// equality, and mismatched kinds are unequal.
    [[nodiscard]] bool matches(const MonitoringEvent& e) const;

    friend bool operator==(const Filter&, const Filter&) = default;
};

/// The closed statement language:
///
///   SELECT <agg>(<prop>) FROM <EventType> WINDOW <time_batch|sliding>(<n> [ms|sec|min])
///          [WHERE <prop> <cmp> <literal>]
///
/// Keywords are case-insensitive; count accepts any property (including *).
struct MetricStatement {
    Aggregate aggregate = Aggregate::Count;
    std::string property;
    std::string event_type;
    WindowSpec window;
    std::optional<Filter> filter;

    /// Throws InvalidStatement.
    static MetricStatement parse(std::string_view text);
    [[nodiscard]] std::string to_string() const;

    /// Throws InvalidStatement on non-positive durations or empty names.
    void validate() const;

    [[nodiscard]] bool selects(const MonitoringEvent& e) const {
        return e.type == event_type && (!filter || filter->matches(e));
    }

    friend bool operator==(const MetricStatement&, const MetricStatement&) = default;
};

/// A metric: name, value type, statement.
struct MonitoringMetric {
    std::string name;
    MetricType value_type = MetricType::Float64;
    MetricStatement statement;
};

}// namespace elastikit::events

#endif// ELASTIKIT_EVENTS_STATEMENT_HPP
