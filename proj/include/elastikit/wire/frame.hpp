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

#ifndef ELASTIKIT_WIRE_FRAME_HPP
#define ELASTIKIT_WIRE_FRAME_HPP

#include <elastikit/core/codec.hpp>
#include <elastikit/wire/message.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

namespace elastikit::wire {

/// u32 length | u8 msg_type | u64 request_id
inline constexpr std::size_t kFrameHeaderSize = 13;
inline constexpr std::size_t kMaxFramePayload = 16u * 1024u * 1024u;

struct DecodedFrame {
    Message message;
    std::uint64_t request_id = 0;
};

Bytes encode_payload(const Message& m, const CodecLimits& limits = {});
Message decode_payload(MsgType type, std::span<const std::uint8_t> payload, const CodecLimits& limits = {});

/// Big-endian frame per the layout above. SizeExceeded if the payload is
/// larger than limits.max_bytes.
Bytes encode_frame(const Message& m, std::uint64_t request_id, const CodecLimits& limits = {});

/// Decodes one frame from the front of `stream`.
/// Returns the frame and the number of bytes consumed (length + 13).
/// Empty or truncated input: ConnectionClosed. Out-of-catalog type:
/// UnknownMsgType. Oversized length or bad payload: MalformedFrame.
std::pair<DecodedFrame, std::size_t> decode_frame(std::span<const std::uint8_t> stream,
                                                  const CodecLimits& limits = {});

/// Incremental decoder for byte streams that arrive in arbitrary chunks.
/// Buffered bytes never exceed one header plus the declared (capped)
/// payload length plus the most recent chunk.
class FrameDecoder {
  public:
    explicit FrameDecoder(CodecLimits limits = {}) : limits_(limits) {}

    void feed(std::span<const std::uint8_t> chunk);

    /// Next complete frame, or nullopt if more bytes are needed.
    /// Errors leave the decoder failed; further calls rethrow.
    std::optional<DecodedFrame> next();

    /// Call at end of stream; throws ConnectionClosed if a frame is
    /// partially buffered.
    void finish() const;

    [[nodiscard]] std::size_t buffered() const { return buffer_.size() - read_pos_; }

  private:
    CodecLimits limits_;
    Bytes buffer_;
    std::size_t read_pos_ = 0;
    std::optional<Error> failed_;
};

}// namespace elastikit::wire

#endif// ELASTIKIT_WIRE_FRAME_HPP
