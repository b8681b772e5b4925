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

#ifndef ELASTIKIT_WIRE_MESSAGE_HPP
#define ELASTIKIT_WIRE_MESSAGE_HPP

#include <elastikit/artifacts/digest.hpp>
#include <elastikit/core/error.hpp>
#include <elastikit/core/event.hpp>
#include <elastikit/core/ids.hpp>
#include <elastikit/core/value.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace elastikit::wire {

inline constexpr std::uint16_t kProtocolVersion = 1;

enum class MsgType : std::uint8_t {
    DeployCO = 0x01,
    InvokeCO = 0x02,
    GetField = 0x03,
    SetField = 0x04,
    DestroyCO = 0x05,
    SnapshotCO = 0x06,
    RestoreCO = 0x07,
    ArtifactFetch = 0x08,
    ArtifactData = 0x09,
    GlobalGet = 0x0A,
    GlobalSet = 0x0B,
    EventPush = 0x0C,
    Hello = 0x10,
    Ok = 0x7E,
    Err = 0x7F,
};

std::optional<MsgType> msg_type_from_byte(std::uint8_t b) noexcept;
std::string_view to_string(MsgType t) noexcept;

struct DeployCO {
    CloudObjectId co_id;
    std::string class_name;
    List ctor_args;
    friend bool operator==(const DeployCO&, const DeployCO&) = default;
};

struct InvokeCO {
    CloudObjectId co_id;
    std::string method;
    List args;
    friend bool operator==(const InvokeCO&, const InvokeCO&) = default;
};

struct GetField {
    CloudObjectId co_id;
    std::string field;
    friend bool operator==(const GetField&, const GetField&) = default;
};

struct SetField {
    CloudObjectId co_id;
    std::string field;
    Value value;
    friend bool operator==(const SetField&, const SetField&) = default;
};

struct DestroyCO {
    CloudObjectId co_id;
    friend bool operator==(const DestroyCO&, const DestroyCO&) = default;
};

struct SnapshotCO {
    CloudObjectId co_id;
    friend bool operator==(const SnapshotCO&, const SnapshotCO&) = default;
};

struct RestoreCO {
    CloudObjectId co_id;
    std::string class_name;
    Bytes state;
    friend bool operator==(const RestoreCO&, const RestoreCO&) = default;
};

struct ArtifactFetch {
    artifacts::Digest digest;
    friend bool operator==(const ArtifactFetch&, const ArtifactFetch&) = default;
};

struct ArtifactData {
    artifacts::Digest digest;
    Bytes payload;
    friend bool operator==(const ArtifactData&, const ArtifactData&) = default;
};

struct GlobalGet {
    std::string name;
    friend bool operator==(const GlobalGet&, const GlobalGet&) = default;
};

struct GlobalSet {
    std::string name;
    Value value;
    friend bool operator==(const GlobalSet&, const GlobalSet&) = default;
};

/// Carries an event without a timestamp; the receiving bus stamps it.
struct EventPush {
    MonitoringEvent event;
    friend bool operator==(const EventPush&, const EventPush&) = default;
};

/// Connection handshake: protocol version and class-registry digest.
struct Hello {
    std::uint16_t version = kProtocolVersion;
    std::array<std::uint8_t, 32> registry_digest{};
    friend bool operator==(const Hello&, const Hello&) = default;
};

struct Ok {
    Value value;
    friend bool operator==(const Ok&, const Ok&) = default;
};

struct Err {
    ErrorCode code = ErrorCode::Internal;
    std::string detail;
    friend bool operator==(const Err&, const Err&) = default;

    [[nodiscard]] Error to_error() const { return Error(code, detail); }
    static Err from(const Error& e) { return {e.code(), e.detail()}; }
};

using Message = std::variant<DeployCO, InvokeCO, GetField, SetField, DestroyCO, SnapshotCO, RestoreCO, ArtifactFetch,
                             ArtifactData, GlobalGet, GlobalSet, EventPush, Hello, Ok, Err>;

MsgType type_of(const Message& m) noexcept;

/// Ok, Err and ArtifactData answer a request; everything else is a
/// request or (EventPush) a one-way notification.
[[nodiscard]] bool is_response(MsgType t) noexcept;

/// If m is Err, throws it as an Error; if it is Ok, returns its value.
/// Any other message is a protocol violation (MalformedFrame).
Value unwrap(const Message& m);

}// namespace elastikit::wire

#endif// ELASTIKIT_WIRE_MESSAGE_HPP
