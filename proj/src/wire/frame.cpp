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

#include <elastikit/wire/frame.hpp>

#include <algorithm>

namespace elastikit::wire {
namespace {

template <typename Id>
Id read_id(ByteReader& r) {
    auto raw = r.raw(Id::kSize);
    std::array<std::uint8_t, Id::kSize> b{};
    std::copy(raw.begin(), raw.end(), b.begin());
    return Id{b};
}

artifacts::Digest read_digest(ByteReader& r) {
    auto raw = r.raw(artifacts::Digest::kSize);
    std::array<std::uint8_t, artifacts::Digest::kSize> b{};
    std::copy(raw.begin(), raw.end(), b.begin());
    return artifacts::Digest{b};
}

List read_list(ByteReader& r, const CodecLimits& limits) {
    auto v = r.value(limits);
    if (v.kind() != Value::Kind::List) {
        throw Error(ErrorCode::MalformedEncoding, "expected argument list");
    }
    return v.as_list();
}

void write_event(ByteWriter& w, const MonitoringEvent& e, const CodecLimits& limits) {
    w.str(e.type);
    w.u8(static_cast<std::uint8_t>(e.source.kind));
    w.raw(e.source.id);
    w.value(Value::map(e.properties), limits);
}

MonitoringEvent read_event(ByteReader& r, const CodecLimits& limits) {
    MonitoringEvent e;
    e.type = r.str();
    auto kind = r.u8();
    if (kind > 3) {
        throw Error(ErrorCode::MalformedEncoding, "unknown event source kind");
    }
    e.source.kind = static_cast<EventSource::Kind>(kind);
    auto id = r.raw(16);
    std::copy(id.begin(), id.end(), e.source.id.begin());
    auto props = r.value(limits);
    if (props.kind() != Value::Kind::Map) {
        throw Error(ErrorCode::MalformedEncoding, "event properties must be a map");
    }
    e.properties = props.as_map();
    return e;
}

}// namespace

Bytes encode_payload(const Message& m, const CodecLimits& limits) {
    ByteWriter w(limits.max_bytes);
    std::visit(
        [&](auto const& msg) {
            using T = std::decay_t<decltype(msg)>;
            if constexpr (std::is_same_v<T, DeployCO>) {
                w.raw(msg.co_id.bytes());
                w.str(msg.class_name);
                w.value(Value::list(msg.ctor_args), limits);
            } else if constexpr (std::is_same_v<T, InvokeCO>) {
                w.raw(msg.co_id.bytes());
                w.str(msg.method);
                w.value(Value::list(msg.args), limits);
            } else if constexpr (std::is_same_v<T, GetField>) {
                w.raw(msg.co_id.bytes());
                w.str(msg.field);
            } else if constexpr (std::is_same_v<T, SetField>) {
                w.raw(msg.co_id.bytes());
                w.str(msg.field);
                w.value(msg.value, limits);
            } else if constexpr (std::is_same_v<T, DestroyCO> || std::is_same_v<T, SnapshotCO>) {
                w.raw(msg.co_id.bytes());
            } else if constexpr (std::is_same_v<T, RestoreCO>) {
                w.raw(msg.co_id.bytes());
                w.str(msg.class_name);
                w.blob(msg.state);
            } else if constexpr (std::is_same_v<T, ArtifactFetch>) {
                w.raw(msg.digest.bytes());
            } else if constexpr (std::is_same_v<T, ArtifactData>) {
                w.raw(msg.digest.bytes());
                w.blob(msg.payload);
            } else if constexpr (std::is_same_v<T, GlobalGet>) {
                w.str(msg.name);
            } else if constexpr (std::is_same_v<T, GlobalSet>) {
                w.str(msg.name);
                w.value(msg.value, limits);
            } else if constexpr (std::is_same_v<T, EventPush>) {
                write_event(w, msg.event, limits);
            } else if constexpr (std::is_same_v<T, Hello>) {
                w.u16(msg.version);
                w.raw(msg.registry_digest);
            } else if constexpr (std::is_same_v<T, Ok>) {
                w.value(msg.value, limits);
            } else if constexpr (std::is_same_v<T, Err>) {
                w.u16(static_cast<std::uint16_t>(msg.code));
                w.str(msg.detail);
            }
        },
        m);
    return std::move(w).take();
}

Message decode_payload(MsgType type, std::span<const std::uint8_t> payload, const CodecLimits& limits) {
    ByteReader r(payload);
    Message out = [&]() -> Message {
        switch (type) {
            case MsgType::DeployCO: {
                DeployCO m;
                m.co_id = read_id<CloudObjectId>(r);
                m.class_name = r.str();
                m.ctor_args = read_list(r, limits);
                return m;
            }
            case MsgType::InvokeCO: {
                InvokeCO m;
                m.co_id = read_id<CloudObjectId>(r);
                m.method = r.str();
                m.args = read_list(r, limits);
                return m;
            }
            case MsgType::GetField: {
                GetField m;
                m.co_id = read_id<CloudObjectId>(r);
                m.field = r.str();
                return m;
            }
            case MsgType::SetField: {
                SetField m;
                m.co_id = read_id<CloudObjectId>(r);
                m.field = r.str();
                m.value = r.value(limits);
                return m;
            }
            case MsgType::DestroyCO: return DestroyCO{read_id<CloudObjectId>(r)};
            case MsgType::SnapshotCO: return SnapshotCO{read_id<CloudObjectId>(r)};
            case MsgType::RestoreCO: {
                RestoreCO m;
                m.co_id = read_id<CloudObjectId>(r);
                m.class_name = r.str();
                m.state = r.blob();
                return m;
            }
            case MsgType::ArtifactFetch: return ArtifactFetch{read_digest(r)};
            case MsgType::ArtifactData: {
                ArtifactData m;
                m.digest = read_digest(r);
                m.payload = r.blob();
                return m;
            }
            case MsgType::GlobalGet: return GlobalGet{r.str()};
            case MsgType::GlobalSet: {
                GlobalSet m;
                m.name = r.str();
                m.value = r.value(limits);
                return m;
            }
            case MsgType::EventPush: return EventPush{read_event(r, limits)};
            case MsgType::Hello: {
                Hello m;
                m.version = r.u16();
                auto d = r.raw(32);
                std::copy(d.begin(), d.end(), m.registry_digest.begin());
                return m;
            }
            case MsgType::Ok: return Ok{r.value(limits)};
            case MsgType::Err: {
                auto raw = r.u16();
                auto code = error_code_from_wire(raw).value_or(ErrorCode::Internal);
                return Err{code, r.str()};
            }
        }
        throw Error(ErrorCode::UnknownMsgType, "unhandled type");
    }();
    r.expect_done();
    return out;
}

Bytes encode_frame(const Message& m, std::uint64_t request_id, const CodecLimits& limits) {
    auto payload = encode_payload(m, limits);
    ByteWriter w;
    w.u32(static_cast<std::uint32_t>(payload.size()));
    w.u8(static_cast<std::uint8_t>(type_of(m)));
    w.u64(request_id);
    w.raw(payload);
    return std::move(w).take();
}

namespace {

struct Header {
    std::uint32_t length;
    std::uint8_t type_byte;
    std::uint64_t request_id;
};

Header read_header(std::span<const std::uint8_t> bytes, const CodecLimits& limits) {
    ByteReader r(bytes.first(kFrameHeaderSize));
    Header h{r.u32(), r.u8(), r.u64()};
    if (h.length > limits.max_bytes) {
        throw Error(ErrorCode::MalformedFrame, "declared length " + std::to_string(h.length) + " exceeds cap");
    }
    return h;
}

DecodedFrame decode_body(const Header& h, std::span<const std::uint8_t> payload, const CodecLimits& limits) {
    auto type = msg_type_from_byte(h.type_byte);
    if (!type) {
        throw Error(ErrorCode::UnknownMsgType, "msg_type 0x" + to_hex(std::span<const std::uint8_t>(&h.type_byte, 1)));
    }
    try {
        return {decode_payload(*type, payload, limits), h.request_id};
    } catch (const Error& e) {
        if (e.code() == ErrorCode::MalformedEncoding || e.code() == ErrorCode::DepthExceeded ||
            e.code() == ErrorCode::SizeExceeded) {
            throw Error(ErrorCode::MalformedFrame, e.what());
        }
        throw;
    }
}

}// namespace

std::pair<DecodedFrame, std::size_t> decode_frame(std::span<const std::uint8_t> stream, const CodecLimits& limits) {
    if (stream.size() < kFrameHeaderSize) {
        throw Error(ErrorCode::ConnectionClosed, stream.empty() ? "end of stream" : "end of stream inside frame header");
    }
    auto h = read_header(stream, limits);
    if (stream.size() - kFrameHeaderSize < h.length) {
        throw Error(ErrorCode::ConnectionClosed, "end of stream inside frame payload");
    }
    auto total = kFrameHeaderSize + h.length;
    return {decode_body(h, stream.subspan(kFrameHeaderSize, h.length), limits), total};
}

void FrameDecoder::feed(std::span<const std::uint8_t> chunk) {
    if (read_pos_ > 0 && read_pos_ * 2 >= buffer_.size()) {
        buffer_.erase(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(read_pos_));
        read_pos_ = 0;
    }
    buffer_.insert(buffer_.end(), chunk.begin(), chunk.end());
}

std::optional<DecodedFrame> FrameDecoder::next() {
    if (failed_) {
        throw *failed_;
    }
    try {
        std::span<const std::uint8_t> avail(buffer_.data() + read_pos_, buffer_.size() - read_pos_);
        if (avail.size() < kFrameHeaderSize) {
            return std::nullopt;
        }
        auto h = read_header(avail, limits_);
        if (avail.size() - kFrameHeaderSize < h.length) {
            return std::nullopt;
        }
        read_pos_ += kFrameHeaderSize + h.length;
        return decode_body(h, avail.subspan(kFrameHeaderSize, h.length), limits_);
    } catch (const Error& e) {
        failed_ = e;
        throw;
    }
}

void FrameDecoder::finish() const {
    if (buffered() > 0) {
        throw Error(ErrorCode::ConnectionClosed, "end of stream inside frame");
    }
}

}// namespace elastikit::wire
