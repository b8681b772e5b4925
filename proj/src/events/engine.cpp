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
#include <elastikit/events/engine.hpp>

namespace elastikit::events {

std::optional<RepositoryEntry> MonitoringRepository::query(const std::string& name) const {
    auto it = rows_.find(name);
    if (it == rows_.end()) {
        throw Error(ErrorCode::UnknownMetric, name);
    }
    return it->second;
}

double MonitoringRepository::number_or(const std::string& name, double fallback) const {
    auto it = rows_.find(name);
    if (it == rows_.end() || !it->second || !it->second->value.is_numeric()) {
        return fallback;
    }
    return it->second->value.as_number();
}

void MonitoringRepository::write(const std::string& name, Value v, std::int64_t at) {
    auto& row = rows_[name];
    if (row && row->updated_at > at) {
        return;
    }
    row = RepositoryEntry{std::move(v), at};
}

// ---------------------------------------------------------------------------

void MetricEngine::register_metric(const MonitoringMetric& metric, std::int64_t now) {
    metric.statement.validate();
    if (metric.name.empty()) {
        throw Error(ErrorCode::InvalidStatement, "metric name must not be empty");
    }
    auto agg = metric.statement.aggregate;
    if (agg == Aggregate::Avg && metric.value_type != MetricType::Float64) {
        throw Error(ErrorCode::InvalidStatement, "avg yields Float64 but metric '" + metric.name + "' is Int64");
    }
    if (agg == Aggregate::Count && metric.value_type != MetricType::Int64) {
        throw Error(ErrorCode::InvalidStatement, "count yields Int64 but metric '" + metric.name + "' is Float64");
    }
    std::lock_guard lock(mu_);
    if (metrics_.contains(metric.name) || repo_.has_metric(metric.name)) {
        throw Error(ErrorCode::DuplicateMetric, metric.name);
    }
    MetricState st;
    st.metric = metric;
    st.window_start = now;
    metrics_.emplace(metric.name, std::move(st));
    repo_.add_row(metric.name);
}

void MetricEngine::register_derived(const std::string& name, const std::string& source, DerivedFn fn) {
    std::lock_guard lock(mu_);
    if (metrics_.contains(name) || repo_.has_metric(name)) {
        throw Error(ErrorCode::DuplicateMetric, name);
    }
    if (!repo_.has_metric(source)) {
        throw Error(ErrorCode::UnknownMetric, source);
    }
    derived_.emplace(source, std::make_pair(name, std::move(fn)));
    repo_.add_row(name);
}

void MetricEngine::set_listener(UpdateListener listener) {
    std::lock_guard lock(mu_);
    listener_ = std::move(listener);
}

void MetricEngine::write_locked(const std::string& name, Value v, std::int64_t at) {
    if (listener_) {
        listener_(name, v, at);
    }
    auto [first, last] = derived_.equal_range(name);
    for (auto it = first; it != last; ++it) {
        write_locked(it->second.first, it->second.second(v), at);
    }
    repo_.write(name, std::move(v), at);
}

std::optional<Value> MetricEngine::sample_of(MetricState& s, const MonitoringEvent& e) {
    auto const& st = s.metric.statement;
    if (st.aggregate == Aggregate::Count) {
        return Value::null();
    }
    auto const* v = e.property(st.property);
    if (v == nullptr || !v->is_numeric()) {
        ++s.skipped;
        return std::nullopt;
    }
    if (s.metric.value_type == MetricType::Int64) {
        if (v->kind() != Value::Kind::Int64) {
            ++s.skipped;
            return std::nullopt;
        }
        return *v;
    }
    return Value::float64(v->as_number());
}

void MetricEngine::accumulate(Accumulator& acc, const Value& sample, MetricType type) {
    ++acc.count;
    if (sample.is_null()) {
        return;
    }
    if (type == MetricType::Int64) {
        auto x = sample.as_int64();
        acc.int_sum += x;
        if (!acc.min || x < acc.min->as_int64()) acc.min = sample;
        if (!acc.max || x > acc.max->as_int64()) acc.max = sample;
    } else {
        auto x = sample.as_float64();
        acc.float_sum += x;
        if (!acc.min || x < acc.min->as_float64()) acc.min = sample;
        if (!acc.max || x > acc.max->as_float64()) acc.max = sample;
    }
}

Value MetricEngine::result(const Accumulator& acc, Aggregate agg, MetricType type) {
    switch (agg) {
        case Aggregate::Count: return Value::int64(static_cast<std::int64_t>(acc.count));
        case Aggregate::Sum: return type == MetricType::Int64 ? Value::int64(acc.int_sum) : Value::float64(acc.float_sum);
        case Aggregate::Avg:
            return acc.count == 0 ? Value::null() : Value::float64(acc.float_sum / static_cast<double>(acc.count));
        case Aggregate::Min: return acc.min.value_or(Value::null());
        case Aggregate::Max: return acc.max.value_or(Value::null());
    }
    return Value::null();
}

void MetricEngine::close_windows_locked(MetricState& s, std::int64_t now) {
    auto const& w = s.metric.statement.window;
    if (w.kind != WindowSpec::Kind::TimeBatch) {
        return;
    }
    while (now >= s.window_start + w.duration_ms) {
        auto end = s.window_start + w.duration_ms;
        write_locked(s.metric.name, result(s.acc, s.metric.statement.aggregate, s.metric.value_type), end);
        s.acc = Accumulator{};
        s.window_start = end;
    }
}

void MetricEngine::on_event(const MonitoringEvent& e) {
    std::lock_guard lock(mu_);
    for (auto& [name, s] : metrics_) {
        close_windows_locked(s, e.timestamp);
        if (!s.metric.statement.selects(e) || e.timestamp < s.window_start) {
            continue;
        }
        auto sample = sample_of(s, e);
        if (!sample) {
            continue;
        }
        if (s.metric.statement.window.kind == WindowSpec::Kind::TimeBatch) {
            accumulate(s.acc, *sample, s.metric.value_type);
            continue;
        }
        auto d = s.metric.statement.window.duration_ms;
        s.sliding.push_back({e.timestamp, *sample});
        while (!s.sliding.empty() && s.sliding.front().at <= e.timestamp - d) {
            s.sliding.pop_front();
        }
        Accumulator acc;
        for (auto const& smp : s.sliding) {
            accumulate(acc, smp.value, s.metric.value_type);
        }
        write_locked(name, result(acc, s.metric.statement.aggregate, s.metric.value_type), e.timestamp);
    }
}

void MetricEngine::advance_to(std::int64_t now) {
    std::lock_guard lock(mu_);
    for (auto& [name, s] : metrics_) {
        close_windows_locked(s, now);
    }
}

std::optional<RepositoryEntry> MetricEngine::query(const std::string& name) const {
    std::lock_guard lock(mu_);
    return repo_.query(name);
}

std::uint64_t MetricEngine::skipped(const std::string& name) const {
    std::lock_guard lock(mu_);
    auto it = metrics_.find(name);
    if (it == metrics_.end()) {
        throw Error(ErrorCode::UnknownMetric, name);
    }
    return it->second.skipped;
}

MonitoringRepository MetricEngine::snapshot() const {
    std::lock_guard lock(mu_);
    return repo_;
}

}// namespace elastikit::events
