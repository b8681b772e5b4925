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

#ifndef ELASTIKIT_CORE_VALUE_HPP
#define ELASTIKIT_CORE_VALUE_HPP

#include <elastikit/core/ids.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace elastikit {

class Value;

using Bytes = std::vector<std::uint8_t>;
using List = std::vector<Value>;
/// std::map<std::string, ...> orders keys by unsigned byte comparison, which is
/// the canonical key order of the encoding.
using Map = std::map<std::string, Value>;

/// The tagged union that crosses the wire: arguments, results, fields,
/// globals and event properties are all Values.
class Value {
  public:
    enum class Kind : std::uint8_t {
        Null = 0x00,
        Bool = 0x01,
        Int64 = 0x02,
        Float64 = 0x03,
        Text = 0x04,
        Bytes = 0x05,
        List = 0x06,
        Map = 0x07,
        Ref = 0x08,
    };

    Value() = default;

    static Value null() { return {}; }
    static Value boolean(bool b) { return Value{Storage{b}}; }
    static Value int64(std::int64_t i) { return Value{Storage{i}}; }
    static Value float64(double d) { return Value{Storage{d}}; }
    static Value text(std::string s) { return Value{Storage{std::move(s)}}; }
    static Value bytes(Bytes b) { return Value{Storage{std::move(b)}}; }
    static Value list(List l) { return Value{Storage{std::move(l)}}; }
    static Value map(Map m) { return Value{Storage{std::move(m)}}; }
    static Value ref(CloudObjectId id) { return Value{Storage{id}}; }

    [[nodiscard]] Kind kind() const noexcept { return static_cast<Kind>(storage_.index()); }
    [[nodiscard]] bool is_null() const noexcept { return kind() == Kind::Null; }
    [[nodiscard]] bool is_numeric() const noexcept { return kind() == Kind::Int64 || kind() == Kind::Float64; }

    // Accessors throw Error{TypeMismatch} on the wrong kind.
    [[nodiscard]] bool as_bool() const;
    [[nodiscard]] std::int64_t as_int64() const;
    [[nodiscard]] double as_float64() const;
    /// Int64 or Float64 widened to double.
    [[nodiscard]] double as_number() const;
    [[nodiscard]] const std::string& as_text() const;
    [[nodiscard]] const Bytes& as_bytes() const;
    [[nodiscard]] const List& as_list() const;
    [[nodiscard]] const Map& as_map() const;
    [[nodiscard]] CloudObjectId as_ref() const;

    /// True if a Ref appears anywhere in this tree.
    [[nodiscard]] bool contains_ref() const;

    /// Structural equality; Float64 compares by bit pattern so that NaN
    /// payloads and signed zeros round-trip as equal-to-themselves.
    friend bool operator==(const Value& a, const Value& b);

  private:
    using Storage = std::variant<std::monostate, bool, std::int64_t, double, std::string, Bytes, List, Map, CloudObjectId>;
    explicit Value(Storage s) : storage_(std::move(s)) {}

    Storage storage_;
};

std::string_view to_string(Value::Kind kind) noexcept;

/// Human-readable rendering for logs and test failures.
std::string to_debug_string(const Value& v);

}// namespace elastikit

#endif// ELASTIKIT_CORE_VALUE_HPP
