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

#include <elastikit/events/bus.hpp>

namespace elastikit::events {

EventBus::EventBus(const Clock& clock, MetricEngine& engine, std::size_t capacity)
    : clock_(clock), engine_(engine), capacity_(capacity), dispatcher_(&EventBus::run, this) {}

EventBus::~EventBus() {
    {
        std::lock_guard lock(mu_);
        stop_ = true;
        paused_ = false;
    }
    cv_.notify_all();
    dispatcher_.join();
}

bool EventBus::emit(MonitoringEvent event) {
    {
        std::lock_guard lock(mu_);
        auto now = clock_.now_ms();
        event.timestamp = now;
        if (queue_.size() >= capacity_) {
            ++dropped_;
            if (last_drop_notice_ < 0 || now - last_drop_notice_ >= 1000) {
                last_drop_notice_ = now;
                MonitoringEvent notice{std::string(event_type::Drop), now, EventSource::manager(),
                                       {{"dropped", Value::int64(static_cast<std::int64_t>(dropped_))}}};
                queue_.push_back({false, now, std::move(notice)});
                ++enqueued_;
            }
            cv_.notify_all();
            return false;
        }
        queue_.push_back({false, now, std::move(event)});
        ++enqueued_;
    }
    cv_.notify_all();
    return true;
}

void EventBus::tick() {
    {
        std::lock_guard lock(mu_);
        auto now = clock_.now_ms();
        if (!queue_.empty() && queue_.back().is_tick) {
            queue_.back().at = now;
        } else {
            queue_.push_back({true, now, {}});
            ++enqueued_;
        }
    }
    cv_.notify_all();
}

void EventBus::flush() {
    std::unique_lock lock(mu_);
    auto target = enqueued_;
    drained_cv_.wait(lock, [&] { return delivered_ >= target || stop_; });
}

std::uint64_t EventBus::subscribe(Subscriber s) {
    std::lock_guard lock(sub_mu_);
    auto id = next_sub_++;
    subscribers_.emplace(id, std::move(s));
    return id;
}

void EventBus::unsubscribe(std::uint64_t id) {
    std::lock_guard lock(sub_mu_);
    subscribers_.erase(id);
}

std::uint64_t EventBus::dropped() const {
    std::lock_guard lock(mu_);
    return dropped_;
}

void EventBus::pause() {
    std::lock_guard lock(mu_);
    paused_ = true;
}

void EventBus::resume() {
    {
        std::lock_guard lock(mu_);
        paused_ = false;
    }
    cv_.notify_all();
}

void EventBus::run() {
    while (true) {
        Item item;
        {
            std::unique_lock lock(mu_);
            cv_.wait(lock, [&] { return stop_ || (!paused_ && !queue_.empty()); });
            if (queue_.empty()) {
                drained_cv_.notify_all();
                return;// only reachable when stopping
            }
            item = std::move(queue_.front());
            queue_.pop_front();
        }
        if (item.is_tick) {
            engine_.advance_to(item.at);
        } else {
            engine_.on_event(item.event);
            std::lock_guard sub_lock(sub_mu_);
            for (auto& [id, s] : subscribers_) {
                s(item.event);
            }
        }
        {
            std::lock_guard lock(mu_);
            ++delivered_;
        }
        drained_cv_.notify_all();
    }
}

EventRecorder::EventRecorder(EventBus& bus) : bus_(bus) {
    id_ = bus_.subscribe([this](const MonitoringEvent& e) {
        std::lock_guard lock(mu_);
        events_.push_back(e);
    });
}

EventRecorder::~EventRecorder() { bus_.unsubscribe(id_); }

std::vector<MonitoringEvent> EventRecorder::events() const {
    std::lock_guard lock(mu_);
    return events_;
}

std::vector<MonitoringEvent> EventRecorder::of_type(std::string_view type) const {
    std::lock_guard lock(mu_);
    std::vector<MonitoringEvent> out;
    for (auto const& e : events_) {
        if (e.type == type) out.push_back(e);
    }
    return out;
}

std::size_t EventRecorder::count(std::string_view type) const {
    std::lock_guard lock(mu_);
    std::size_t n = 0;
    for (auto const& e : events_) {
        if (e.type == type) ++n;
    }
    return n;
}

}// namespace elastikit::events
