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
#include <elastikit/core/value.hpp>

#include <bit>
#include <sstream>

namespace elastikit {
namespace {

[[noreturn]] void mismatch(Value::Kind want, Value::Kind got) {
    throw Error(ErrorCode::TypeMismatch,
                "expected " + std::string(to_string(want)) + ", got " + std::string(to_string(got)));
}

}// namespace

std::string_view to_string(Value::Kind kind) noexcept {
    switch (kind) {
        case Value::Kind::Null: return "Null";
        case Value::Kind::Bool: return "Bool";
        case Value::Kind::Int64: return "Int64";
        case Value::Kind::Float64: return "Float64";
        case Value::Kind::Text: return "Text";
        case Value::Kind::Bytes: return "Bytes";
        case Value::Kind::List: return "List";
        case Value::Kind::Map: return "Map";
        case Value::Kind::Ref: return "Ref";
    }
    return "?";
}

bool Value::as_bool() const {
    if (auto p = std::get_if<bool>(&storage_)) return *p;
    mismatch(Kind::Bool, kind());
}

std::int64_t Value::as_int64() const {
    if (auto p = std::get_if<std::int64_t>(&storage_)) return *p;
    mismatch(Kind::Int64, kind());
}

double Value::as_float64() const {
    if (auto p = std::get_if<double>(&storage_)) return *p;
    mismatch(Kind::Float64, kind());
}

double Value::as_number() const {
    if (auto p = std::get_if<std::int64_t>(&storage_)) return static_cast<double>(*p);
    if (auto p = std::get_if<double>(&storage_)) return *p;
    mismatch(Kind::Float64, kind());
}

const std::string& Value::as_text() const {
    if (auto p = std::get_if<std::string>(&storage_)) return *p;
    mismatch(Kind::Text, kind());
}

const Bytes& Value::as_bytes() const {
    if (auto p = std::get_if<Bytes>(&storage_)) return *p;
    mismatch(Kind::Bytes, kind());
}

const List& Value::as_list() const {
    if (auto p = std::get_if<List>(&storage_)) return *p;
    mismatch(Kind::List, kind());
}

const Map& Value::as_map() const {
    if (auto p = std::get_if<Map>(&storage_)) return *p;
    mismatch(Kind::Map, kind());
}

CloudObjectId Value::as_ref() const {
    if (auto p = std::get_if<CloudObjectId>(&storage_)) return *p;
    mismatch(Kind::Ref, kind());
}

bool Value::contains_ref() const {
    switch (kind()) {
        case Kind::Ref: return true;
        case Kind::List:
            for (auto const& v : as_list()) {
                if (v.contains_ref()) return true;
            }
            return false;
        case Kind::Map:
            for (auto const& [k, v] : as_map()) {
                if (v.contains_ref()) return true;
            }
            return false;
        default: return false;
    }
}

bool operator==(const Value& a, const Value& b) {
    if (a.kind() != b.kind()) {
        return false;
    }
    if (a.kind() == Value::Kind::Float64) {
        return std::bit_cast<std::uint64_t>(a.as_float64()) == std::bit_cast<std::uint64_t>(b.as_float64());
    }
    return a.storage_ == b.storage_;
}

std::string to_debug_string(const Value& v) {
    std::ostringstream os;
    switch (v.kind()) {
        case Value::Kind::Null: os << "null"; break;
        case Value::Kind::Bool: os << (v.as_bool() ? "true" : "false"); break;
        case Value::Kind::Int64: os << v.as_int64(); break;
        case Value::Kind::Float64: os << v.as_float64(); break;
        case Value::Kind::Text: os << '"' << v.as_text() << '"'; break;
        case Value::Kind::Bytes: os << "b'" << to_hex(v.as_bytes()) << "'"; break;
        case Value::Kind::Ref: os << "ref:" << v.as_ref().hex(); break;
        case Value::Kind::List: {
            os << '[';
            bool first = true;
            for (auto const& e : v.as_list()) {
                os << (first ? "" : ", ") << to_debug_string(e);
                first = false;
            }
            os << ']';
            break;
        }
        case Value::Kind::Map: {
            os << '{';
            bool first = true;
            for (auto const& [k, e] : v.as_map()) {
                os << (first ? "" : ", ") << k << ": " << to_debug_string(e);
                first = false;
            }
            os << '}';
            break;
        }
    }
    return os.str();
}

}// namespace elastikit
