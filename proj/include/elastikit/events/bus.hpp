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

#ifndef ELASTIKIT_EVENTS_BUS_HPP
#define ELASTIKIT_EVENTS_BUS_HPP

#include <elastikit/core/clock.hpp>
#include <elastikit/core/event.hpp>
#include <elastikit/events/engine.hpp>

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <thread>
#include <vector>

namespace elastikit::events {

inline constexpr std::size_t kDefaultBusCapacity = 65'536;

/// The consolidated monitoring stream.
///
/// emit() stamps the event with the bus clock under the queue lock, so
/// queue order is timestamp order. A single dispatcher thread feeds the
/// metric engine and then every subscriber. When the queue is full the
/// incoming event is dropped and counted, and a DropEvent is queued at most
/// once per second of bus time.
class EventBus {
  public:
    using Subscriber = std::function<void(const MonitoringEvent&)>;

    EventBus(const Clock& clock, MetricEngine& engine, std::size_t capacity = kDefaultBusCapacity);
    ~EventBus();
    EventBus(const EventBus&) = delete;
    EventBus& operator=(const EventBus&) = delete;

    /// False if the event was dropped (QueueFull).
    bool emit(MonitoringEvent event);

    /// Queues a clock tick so time batches close even without traffic.
    void tick();

    /// Blocks until everything queued before the call has been delivered.
    void flush();

    std::uint64_t subscribe(Subscriber s);
    void unsubscribe(std::uint64_t id);

    [[nodiscard]] std::uint64_t dropped() const;
    [[nodiscard]] const Clock& clock() const { return clock_; }
    [[nodiscard]] MetricEngine& engine() { return engine_; }

    /// Stops delivery until resume(); emits still queue. Test hook.
    void pause();
    void resume();

  private:
    struct Item {
        bool is_tick = false;
        std::int64_t at = 0;
        MonitoringEvent event;
    };

    void run();

    const Clock& clock_;
    MetricEngine& engine_;
    std::size_t capacity_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable drained_cv_;
    std::deque<Item> queue_;
    std::uint64_t enqueued_ = 0;
    std::uint64_t delivered_ = 0;
    std::uint64_t dropped_ = 0;
    std::int64_t last_drop_notice_ = -1;
    bool stop_ = false;
    bool paused_ = false;

    std::mutex sub_mu_;
    std::map<std::uint64_t, Subscriber> subscribers_;
    std::uint64_t next_sub_ = 1;

    std::thread dispatcher_;
};

/// Thread-safe subscriber that keeps every event it sees.
class EventRecorder {
  public:
    explicit EventRecorder(EventBus& bus);
    ~EventRecorder();
    EventRecorder(const EventRecorder&) = delete;
    EventRecorder& operator=(const EventRecorder&) = delete;

    [[nodiscard]] std::vector<MonitoringEvent> events() const;
    [[nodiscard]] std::vector<MonitoringEvent> of_type(std::string_view type) const;
    [[nodiscard]] std::size_t count(std::string_view type) const;

  private:
    EventBus& bus_;
    std::uint64_t id_;
    mutable std::mutex mu_;
    std::vector<MonitoringEvent> events_;
};

}// namespace elastikit::events

#endif// ELASTIKIT_EVENTS_BUS_HPP
