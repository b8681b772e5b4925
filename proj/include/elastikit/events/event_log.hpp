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

#ifndef ELASTIKIT_EVENTS_EVENT_LOG_HPP
#define ELASTIKIT_EVENTS_EVENT_LOG_HPP

#include <elastikit/core/event.hpp>
#include <elastikit/events/bus.hpp>

#include <iosfwd>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

namespace elastikit::events {

/// One event as a single JSON object with sorted keys:
///
///   {"props":{...},"source":"host:<hex>","ts":1200,"type":"HostOnline"}
///
/// Values map to JSON naturally (Int64 as integer, Float64 always with a
/// fraction or exponent). Bytes become {"$bytes":"<hex>"}, Refs
/// {"$ref":"<hex>"}, and non-finite floats {"$f64":"nan"|"inf"|"-inf"}.
std::string to_json_line(const MonitoringEvent& e);

/// Inverse of to_json_line. Throws MalformedLog.
MonitoringEvent from_json_line(std::string_view line);

/// Reads a whole log; blank lines are skipped. Throws MalformedLog with the
/// offending line number.
std::vector<MonitoringEvent> read_log(std::istream& in);

/// Bus subscriber that appends every delivered event to a stream.
class EventLogWriter {
  public:
    EventLogWriter(EventBus& bus, std::ostream& out);
    ~EventLogWriter();
    EventLogWriter(const EventLogWriter&) = delete;
    EventLogWriter& operator=(const EventLogWriter&) = delete;

  private:
    EventBus& bus_;
    std::ostream& out_;
    std::mutex mu_;
    std::uint64_t id_;
};

}// namespace elastikit::events

#endif// ELASTIKIT_EVENTS_EVENT_LOG_HPP
