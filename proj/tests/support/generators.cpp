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

#include <array>
#include <bit>
#include <limits>

namespace elastikit::testkit {

std::string Gen::text(std::size_t max_len) {
    static constexpr std::array<std::string_view, 12> alphabet = {"a", "b", "c", "x", "y", "z",
                                                                  "_", ".", "-", "0", " ", "\xc3\xa9"};
    std::string s;
    auto n = index(max_len + 1);
    for (std::size_t i = 0; i < n; ++i) s += alphabet[index(alphabet.size())];
    return s;
}

Bytes Gen::bytes(std::size_t max_len) {
    Bytes b(index(max_len + 1));
    for (auto& x : b) x = static_cast<std::uint8_t>(bits());
    return b;
}

double Gen::any_double() {
    switch (int_in(0, 6)) {
        case 0: return 0.0;
        case 1: return -0.0;
        case 2: return std::numeric_limits<double>::infinity();
        case 3: return std::bit_cast<double>(0x7ff8'0000'0000'0001ULL | (bits() & 0xffffULL));
        case 4: return real(-1e6, 1e6);
        default: return std::bit_cast<double>(bits());
    }
}

Map Gen::map(int depth, bool allow_refs) {
    Map m;
    auto n = index(4);
    for (std::size_t i = 0; i < n; ++i) m[text(6)] = value_impl(depth, allow_refs);
    return m;
}

Value Gen::value(int depth) { return value_impl(depth, true); }
Value Gen::plain_value(int depth) { return value_impl(depth, false); }

Value Gen::value_impl(int depth, bool allow_refs) {
    int hi = depth > 0 ? 8 : 5;
    int k = static_cast<int>(int_in(0, hi));
    switch (k) {
        case 0: return Value::null();
        case 1: return Value::boolean(chance(0.5));
        case 2: return Value::int64(static_cast<std::int64_t>(bits()) >> int_in(0, 63));
        case 3: return Value::float64(any_double());
        case 4: return Value::text(text());
        case 5: return Value::bytes(bytes());
        case 6: {
            List l;
            auto n = index(4);
            for (std::size_t i = 0; i < n; ++i) l.push_back(value_impl(depth - 1, allow_refs));
            return Value::list(std::move(l));
        }
        case 7: return Value::map(map(depth - 1, allow_refs));
        default: return allow_refs ? Value::ref(object_id()) : Value::int64(int_in(-5, 5));
    }
}

MonitoringEvent Gen::event() {
    static const char* types[] = {"ExecutionFinished", "HostOnline", "custom.billing", "ObjectDeployedEvent"};
    MonitoringEvent e;
    e.type = types[index(4)];
    switch (int_in(0, 3)) {
        case 0: e.source = EventSource::manager(); break;
        case 1: e.source = EventSource::host(host_id()); break;
        case 2: e.source = EventSource::object(object_id()); break;
        default: e.source = EventSource::external(); break;
    }
    e.properties = map(2);
    return e;
}

wire::Message Gen::message() {
    auto id = object_id();
    switch (int_in(0, 14)) {
        case 0: {
            List args;
            for (auto n = index(3); n > 0; --n) args.push_back(value());
            return wire::DeployCO{id, text(), std::move(args)};
        }
        case 1: {
            List args;
            for (auto n = index(3); n > 0; --n) args.push_back(value());
            return wire::InvokeCO{id, text(), std::move(args)};
        }
        case 2: return wire::GetField{id, text()};
        case 3: return wire::SetField{id, text(), value()};
        case 4: return wire::DestroyCO{id};
        case 5: return wire::SnapshotCO{id};
        case 6: return wire::RestoreCO{id, text(), bytes(64)};
        case 7: {
            std::array<std::uint8_t, 32> d{};
            for (auto& x : d) x = static_cast<std::uint8_t>(bits());
            return wire::ArtifactFetch{artifacts::Digest(d)};
        }
        case 8: {
            std::array<std::uint8_t, 32> d{};
            for (auto& x : d) x = static_cast<std::uint8_t>(bits());
            return wire::ArtifactData{artifacts::Digest(d), bytes(128)};
        }
        case 9: return wire::GlobalGet{text()};
        case 10: return wire::GlobalSet{text(), value()};
        case 11: return wire::EventPush{event()};
        case 12: {
            wire::Hello h;
            h.version = static_cast<std::uint16_t>(bits());
            for (auto& x : h.registry_digest) x = static_cast<std::uint8_t>(bits());
            return h;
        }
        case 13: return wire::Ok{value()};
        default: {
            static const ErrorCode codes[] = {ErrorCode::UnknownCO, ErrorCode::ApplicationError, ErrorCode::NotQuiescent,
                                              ErrorCode::UnknownDigest};
            return wire::Err{codes[index(4)], text(30)};
        }
    }
}

}// namespace elastikit::testkit
