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

#ifndef ELASTIKIT_CORE_CODEC_HPP
#define ELASTIKIT_CORE_CODEC_HPP

#include <elastikit/core/value.hpp>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace elastikit {

struct CodecLimits {
    std::size_t max_depth = 64;
    std::size_t max_bytes = 16u * 1024u * 1024u;
};

/// Canonical tag-length-value encoding. Integers and floats are big-endian,
/// Text/Bytes carry a u32 length, List/Map a u32 element count, and Map keys
/// are emitted in ascending byte order.
///
/// Throws DepthExceeded when containers nest deeper than limits.max_depth and
/// SizeExceeded when the output would exceed limits.max_bytes.
Bytes encode_value(const Value& v, const CodecLimits& limits = {});

/// Inverse of encode_value. Rejects trailing bytes, unknown tags, truncation,
/// non-canonical maps and non-0/1 booleans with MalformedEncoding.
Value decode_value(std::span<const std::uint8_t> bytes, const CodecLimits& limits = {});

/// Big-endian append-only buffer used by the codec and the wire layer.
class ByteWriter {
  public:
    explicit ByteWriter(std::size_t limit = SIZE_MAX) : limit_(limit) {}

    void u8(std::uint8_t v);
    void u16(std::uint16_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void raw(std::span<const std::uint8_t> data);
    /// u32 length prefix followed by the bytes.
    void blob(std::span<const std::uint8_t> data);
    void str(std::string_view s);
    void value(const Value& v, const CodecLimits& limits);

    [[nodiscard]] const Bytes& bytes() const& { return out_; }
    [[nodiscard]] Bytes take() && { return std::move(out_); }

  private:
    void reserve_more(std::size_t n);
    void value_at(const Value& v, const CodecLimits& limits, std::size_t depth);

    Bytes out_;
    std::size_t limit_;
};

/// Bounds-checked big-endian reader. Every failure is MalformedEncoding.
class ByteReader {
  public:
    explicit ByteReader(std::span<const std::uint8_t> data) : data_(data) {}

    std::uint8_t u8();
    std::uint16_t u16();
    std::uint32_t u32();
    std::uint64_t u64();
    std::span<const std::uint8_t> raw(std::size_t n);
    Bytes blob();
    std::string str();
    Value value(const CodecLimits& limits);

    [[nodiscard]] std::size_t remaining() const { return data_.size() - pos_; }
    [[nodiscard]] bool done() const { return pos_ == data_.size(); }
    /// Throws MalformedEncoding if any bytes are left.
    void expect_done() const;

  private:
    Value value_at(const CodecLimits& limits, std::size_t depth);

    std::span<const std::uint8_t> data_;
    std::size_t pos_ = 0;
};

}// namespace elastikit

#endif// ELASTIKIT_CORE_CODEC_HPP
