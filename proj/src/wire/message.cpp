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

#include <elastikit/wire/message.hpp>

namespace elastikit::wire {

std::optional<MsgType> msg_type_from_byte(std::uint8_t b) noexcept {
    if ((b >= 0x01 && b <= 0x0C) || b == 0x10 || b == 0x7E || b == 0x7F) {
        return static_cast<MsgType>(b);
    }
    return std::nullopt;
}

std::string_view to_string(MsgType t) noexcept {
    switch (t) {
        case MsgType::DeployCO: return "DeployCO";
        case MsgType::InvokeCO: return "InvokeCO";
        case MsgType::GetField: return "GetField";
        case MsgType::SetField: return "SetField";
        case MsgType::DestroyCO: return "DestroyCO";
        case MsgType::SnapshotCO: return "SnapshotCO";
        case MsgType::RestoreCO: return "RestoreCO";
        case MsgType::ArtifactFetch: return "ArtifactFetch";
        case MsgType::ArtifactData: return "ArtifactData";
        case MsgType::GlobalGet: return "GlobalGet";
        case MsgType::GlobalSet: return "GlobalSet";
        case MsgType::EventPush: return "EventPush";
        case MsgType::Hello: return "Hello";
        case MsgType::Ok: return "Ok";
        case MsgType::Err: return "Err";
    }
    return "?";
}

MsgType type_of(const Message& m) noexcept {
    static constexpr MsgType kByIndex[] = {
        MsgType::DeployCO,     MsgType::InvokeCO,  MsgType::GetField,  MsgType::SetField,  MsgType::DestroyCO,
        MsgType::SnapshotCO,   MsgType::RestoreCO, MsgType::ArtifactFetch, MsgType::ArtifactData, MsgType::GlobalGet,
        MsgType::GlobalSet,    MsgType::EventPush, MsgType::Hello,     MsgType::Ok,        MsgType::Err,
    };
    return kByIndex[m.index()];
}

bool is_response(MsgType t) noexcept { return t == MsgType::Ok || t == MsgType::Err || t == MsgType::ArtifactData; }

Value unwrap(const Message& m) {
    if (auto ok = std::get_if<Ok>(&m)) {
        return ok->value;
    }
    if (auto err = std::get_if<Err>(&m)) {
        throw err->to_error();
    }
    throw Error(ErrorCode::MalformedFrame, "expected Ok or Err, got " + std::string(to_string(type_of(m))));
}

}// namespace elastikit::wire
