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

#ifndef ELASTIKIT_EVENTS_ENGINE_HPP
#define ELASTIKIT_EVENTS_ENGINE_HPP

#include <elastikit/events/statement.hpp>

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace elastikit::events {

struct RepositoryEntry {
    Value value;
    std::int64_t updated_at = 0;
};

/// Latest value per registered metric. Policies receive copies, so reads
/// never contend with the engine.
class MonitoringRepository {
  public:
    /// Throws UnknownMetric for names that were never registered; returns
    /// nullopt for registered metrics that have not fired yet.
    [[nodiscard]] std::optional<RepositoryEntry> query(const std::string& name) const;

    /// Numeric value of a metric, or `fallback` if unknown, absent or Null.
    [[nodiscard]] double number_or(const std::string& name, double fallback) const;

    [[nodiscard]] bool has_metric(const std::string& name) const { return rows_.contains(name); }

    void add_row(const std::string& name) { rows_.emplace(name, std::nullopt); }
    /// Keeps updated_at monotone: older writes are ignored.
    void write(const std::string& name, Value v, std::int64_t at);

  private:
    std::map<std::string, std::optional<RepositoryEntry>> rows_;
};

/// Windowed aggregation over the monitoring stream.
///
/// Time batches are aligned to the metric's registration time and close
/// when time (from ticks or event timestamps) reaches the window end. An
/// empty batch writes Null for avg/min/max and zero for count/sum. Sliding
/// windows write on every selected event, aggregating (now - d, now].
///
/// Not internally concurrent in evaluation order: callers feed events and
/// ticks in timestamp order. All methods are thread-safe.
class MetricEngine {
  public:
    using UpdateListener = std::function<void(const std::string& name, const Value& value, std::int64_t at)>;
    using DerivedFn = std::function<Value(const Value& source_value)>;

    /// Throws DuplicateMetric or InvalidStatement.
    void register_metric(const MonitoringMetric& metric, std::int64_t now);

    /// A metric recomputed from another metric every time the source is
    /// written, at the same timestamp.
    void register_derived(const std::string& name, const std::string& source, DerivedFn fn);

    void on_event(const MonitoringEvent& e);
    void advance_to(std::int64_t now);

    /// Throws UnknownMetric.
    [[nodiscard]] std::optional<RepositoryEntry> query(const std::string& name) const;
    /// Count of selected events whose property was absent or non-numeric.
    [[nodiscard]] std::uint64_t skipped(const std::string& name) const;
    [[nodiscard]] MonitoringRepository snapshot() const;

    void set_listener(UpdateListener listener);

  private:
    struct Sample {
        std::int64_t at;
        Value value;// Int64 or Float64; Null for count
    };

    struct Accumulator {
        std::uint64_t count = 0;
        std::int64_t int_sum = 0;
        double float_sum = 0.0;
        std::optional<Value> min;
        std::optional<Value> max;
    };

    struct MetricState {
        MonitoringMetric metric;
        std::int64_t window_start = 0;
        Accumulator acc;
        std::deque<Sample> sliding;
        std::uint64_t skipped = 0;
    };

    void close_windows_locked(MetricState& s, std::int64_t now);
    void write_locked(const std::string& name, Value v, std::int64_t at);
    std::optional<Value> sample_of(MetricState& s, const MonitoringEvent& e);
    static void accumulate(Accumulator& acc, const Value& sample, MetricType type);
    static Value result(const Accumulator& acc, Aggregate agg, MetricType type);

    mutable std::mutex mu_;
    std::map<std::string, MetricState> metrics_;
    std::multimap<std::string, std::pair<std::string, DerivedFn>> derived_;// source -> (name, fn)
    MonitoringRepository repo_;
    UpdateListener listener_;
};

}// namespace elastikit::events

#endif// ELASTIKIT_EVENTS_ENGINE_HPP
