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
#include <elastikit/events/event_log.hpp>

#include <json.hpp>

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>

namespace elastikit::events {

using nlohmann::json;

namespace {

json to_json(const Value& v) {
    switch (v.kind()) {
        case Value::Kind::Null: return nullptr;
        case Value::Kind::Bool: return v.as_bool();
        case Value::Kind::Int64: return v.as_int64();
        case Value::Kind::Float64: {
            double d = v.as_float64();
            if (std::isnan(d)) {
                auto bits = std::bit_cast<std::uint64_t>(d);
                if (bits == std::bit_cast<std::uint64_t>(std::nan(""))) return json{{"$f64", "nan"}};
                char buf[32];
                std::snprintf(buf, sizeof buf, "nan:%016llx", static_cast<unsigned long long>(bits));
                return json{{"$f64", buf}};
            }
            if (std::isinf(d)) return json{{"$f64", d > 0 ? "inf" : "-inf"}};
            return d;
        }
        case Value::Kind::Text: return v.as_text();
        case Value::Kind::Bytes: return json{{"$bytes", to_hex(v.as_bytes())}};
        case Value::Kind::List: {
            json arr = json::array();
            for (auto const& x : v.as_list()) arr.push_back(to_json(x));
            return arr;
        }
        case Value::Kind::Map: {
            json obj = json::object();
            for (auto const& [k, x] : v.as_map()) obj[k] = to_json(x);
            return obj;
        }
        case Value::Kind::Ref: return json{{"$ref", v.as_ref().hex()}};
    }
    return nullptr;
}

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedLog, why); }

Bytes parse_hex(const std::string& hex) {
    if (hex.size() % 2 != 0) malformed("odd-length hex");
    Bytes out;
    out.reserve(hex.size() / 2);
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        malformed("bad hex digit");
    };
    for (std::size_t i = 0; i < hex.size(); i += 2) {
        out.push_back(static_cast<std::uint8_t>(nibble(hex[i]) << 4 | nibble(hex[i + 1])));
    }
    return out;
}

Value from_json(const json& j) {
    switch (j.type()) {
        case json::value_t::null: return Value::null();
        case json::value_t::boolean: return Value::boolean(j.get<bool>());
        case json::value_t::number_integer: return Value::int64(j.get<std::int64_t>());
        case json::value_t::number_unsigned: {
            auto u = j.get<std::uint64_t>();
            if (u > static_cast<std::uint64_t>(INT64_MAX)) malformed("integer out of range");
            return Value::int64(static_cast<std::int64_t>(u));
        }
        case json::value_t::number_float: return Value::float64(j.get<double>());
        case json::value_t::string: return Value::text(j.get<std::string>());
        case json::value_t::array: {
            List l;
            for (auto const& x : j) l.push_back(from_json(x));
            return Value::list(std::move(l));
        }
        case json::value_t::object: {
            if (j.size() == 1) {
                auto const& [k, x] = *j.items().begin();
                if (k == "$bytes" && x.is_string()) return Value::bytes(parse_hex(x.get<std::string>()));
                if (k == "$ref" && x.is_string()) {
                    auto id = CloudObjectId::from_hex(x.get<std::string>());
                    if (!id) malformed("bad ref id");
                    return Value::ref(*id);
                }
                if (k == "$f64" && x.is_string()) {
                    auto s = x.get<std::string>();
                    if (s == "nan") return Value::float64(std::nan(""));
                    if (s == "inf") return Value::float64(HUGE_VAL);
                    if (s == "-inf") return Value::float64(-HUGE_VAL);
                    if (s.size() == 20 && s.starts_with("nan:")) {
                        std::uint64_t bits = 0;
                        auto [p, ec] = std::from_chars(s.data() + 4, s.data() + s.size(), bits, 16);
                        auto d = std::bit_cast<double>(bits);
                        if (ec == std::errc{} && p == s.data() + s.size() && std::isnan(d)) return Value::float64(d);
                    }
                    malformed("bad $f64 value");
                }
            }
            Map m;
            for (auto const& [k, x] : j.items()) m.emplace(k, from_json(x));
            return Value::map(std::move(m));
        }
        default: malformed("unsupported JSON value");
    }
}

}// namespace

std::string to_json_line(const MonitoringEvent& e) {
    json j = json::object();
    json props = json::object();
    for (auto const& [k, v] : e.properties) props[k] = to_json(v);
    j["props"] = std::move(props);
    j["source"] = e.source.to_string();
    j["ts"] = e.timestamp;
    j["type"] = e.type;
    return j.dump();
}

MonitoringEvent from_json_line(std::string_view line) {
    json j;
    try {
        j = json::parse(line);
    } catch (const json::exception& ex) {
        malformed(ex.what());
    }
    if (!j.is_object()) malformed("record is not an object");
    for (auto const* key : {"props", "source", "ts", "type"}) {
        if (!j.contains(key)) malformed(std::string("missing '") + key + "'");
    }
    if (!j["type"].is_string() || !j["source"].is_string() || !j["ts"].is_number_integer() ||
        !j["props"].is_object()) {
        malformed("field has the wrong JSON type");
    }
    MonitoringEvent e;
    e.type = j["type"].get<std::string>();
    e.timestamp = j["ts"].get<std::int64_t>();
    auto src = EventSource::parse(j["source"].get<std::string>());
    if (!src) malformed("bad source '" + j["source"].get<std::string>() + "'");
    e.source = *src;
    for (auto const& [k, x] : j["props"].items()) e.properties.emplace(k, from_json(x));
    return e;
}

std::vector<MonitoringEvent> read_log(std::istream& in) {
    std::vector<MonitoringEvent> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            out.push_back(from_json_line(line));
        } catch (const Error& e) {
            malformed("line " + std::to_string(n) + ": " + e.detail());
        }
    }
    return out;
}

EventLogWriter::EventLogWriter(EventBus& bus, std::ostream& out) : bus_(bus), out_(out) {
    id_ = bus_.subscribe([this](const MonitoringEvent& e) {
        std::lock_guard lock(mu_);
        out_ << to_json_line(e) << '\n';
        out_.flush();
    });
}

EventLogWriter::~EventLogWriter() { bus_.unsubscribe(id_); }

}// namespace elastikit::events
