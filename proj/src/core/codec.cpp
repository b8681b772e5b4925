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

#include <elastikit/core/codec.hpp>
#include <elastikit/core/error.hpp>

#include <bit>
#include <limits>

namespace elastikit {

// ---------------------------------------------------------------------------
// ByteWriter

void ByteWriter::reserve_more(std::size_t n) {
    if (n > limit_ || out_.size() > limit_ - n) {
        throw Error(ErrorCode::SizeExceeded, "encoded payload exceeds " + std::to_string(limit_) + " bytes");
    }
}

void ByteWriter::u8(std::uint8_t v) {
    reserve_more(1);
    out_.push_back(v);
}

void ByteWriter::u16(std::uint16_t v) {
    reserve_more(2);
    out_.push_back(static_cast<std::uint8_t>(v >> 8));
    out_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
    reserve_more(4);
    for (int shift = 24; shift >= 0; shift -= 8) {
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void ByteWriter::u64(std::uint64_t v) {
    reserve_more(8);
    for (int shift = 56; shift >= 0; shift -= 8) {
        out_.push_back(static_cast<std::uint8_t>(v >> shift));
    }
}

void ByteWriter::raw(std::span<const std::uint8_t> data) {
    reserve_more(data.size());
    out_.insert(out_.end(), data.begin(), data.end());
}

void ByteWriter::blob(std::span<const std::uint8_t> data) {
    if (data.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::SizeExceeded, "blob longer than u32 length prefix");
    }
    u32(static_cast<std::uint32_t>(data.size()));
    raw(data);
}

void ByteWriter::str(std::string_view s) {
    blob({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
}

void ByteWriter::value(const Value& v, const CodecLimits& limits) { value_at(v, limits, 0); }

void ByteWriter::value_at(const Value& v, const CodecLimits& limits, std::size_t depth) {
    u8(static_cast<std::uint8_t>(v.kind()));
    switch (v.kind()) {
        case Value::Kind::Null: break;
        case Value::Kind::Bool: u8(v.as_bool() ? 1 : 0); break;
        case Value::Kind::Int64: u64(static_cast<std::uint64_t>(v.as_int64())); break;
        case Value::Kind::Float64: u64(std::bit_cast<std::uint64_t>(v.as_float64())); break;
        case Value::Kind::Text: str(v.as_text()); break;
        case Value::Kind::Bytes: blob(v.as_bytes()); break;
        case Value::Kind::Ref: raw(v.as_ref().bytes()); break;
        case Value::Kind::List: {
            if (depth + 1 > limits.max_depth) {
                throw Error(ErrorCode::DepthExceeded, "nesting deeper than " + std::to_string(limits.max_depth));
            }
            auto const& l = v.as_list();
            u32(static_cast<std::uint32_t>(l.size()));
            for (auto const& e : l) {
                value_at(e, limits, depth + 1);
            }
            break;
        }
        case Value::Kind::Map: {
            if (depth + 1 > limits.max_depth) {
                throw Error(ErrorCode::DepthExceeded, "nesting deeper than " + std::to_string(limits.max_depth));
            }
            auto const& m = v.as_map();
            u32(static_cast<std::uint32_t>(m.size()));
            for (auto const& [k, e] : m) {
                str(k);
                value_at(e, limits, depth + 1);
            }
            break;
        }
    }
}

// ---------------------------------------------------------------------------
// ByteReader

namespace {
[[noreturn]] void malformed(const char* what) { throw Error(ErrorCode::MalformedEncoding, what); }
}// namespace

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
    if (n > remaining()) {
        malformed("truncated input");
    }
    auto out = data_.subspan(pos_, n);
    pos_ += n;
    return out;
}

std::uint8_t ByteReader::u8() { return raw(1)[0]; }

std::uint16_t ByteReader::u16() {
    auto b = raw(2);
    return static_cast<std::uint16_t>((b[0] << 8) | b[1]);
}

std::uint32_t ByteReader::u32() {
    auto b = raw(4);
    std::uint32_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

std::uint64_t ByteReader::u64() {
    auto b = raw(8);
    std::uint64_t v = 0;
    for (auto x : b) v = (v << 8) | x;
    return v;
}

Bytes ByteReader::blob() {
    auto n = u32();
    auto b = raw(n);
    return {b.begin(), b.end()};
}

std::string ByteReader::str() {
    auto n = u32();
    auto b = raw(n);
    return {reinterpret_cast<const char*>(b.data()), b.size()};
}

void ByteReader::expect_done() const {
    if (!done()) {
        malformed("trailing bytes");
    }
}

Value ByteReader::value(const CodecLimits& limits) { return value_at(limits, 0); }

Value ByteReader::value_at(const CodecLimits& limits, std::size_t depth) {
    auto tag = u8();
    switch (tag) {
        case 0x00: return Value::null();
        case 0x01: {
            auto b = u8();
            if (b > 1) malformed("bool byte must be 0 or 1");
            return Value::boolean(b == 1);
        }
        case 0x02: return Value::int64(static_cast<std::int64_t>(u64()));
        case 0x03: return Value::float64(std::bit_cast<double>(u64()));
        case 0x04: return Value::text(str());
        case 0x05: return Value::bytes(blob());
        case 0x08: {
            auto b = raw(CloudObjectId::kSize);
            std::array<std::uint8_t, CloudObjectId::kSize> id{};
            std::copy(b.begin(), b.end(), id.begin());
            return Value::ref(CloudObjectId{id});
        }
        case 0x06: {
            if (depth + 1 > limits.max_depth) {
                throw Error(ErrorCode::DepthExceeded, "nesting deeper than " + std::to_string(limits.max_depth));
            }
            auto n = u32();
            // Every element needs at least one byte; refuse counts the input
            // cannot possibly satisfy before reserving anything.
            if (n > remaining()) malformed("list count exceeds input");
            List l;
            l.reserve(n);
            for (std::uint32_t i = 0; i < n; ++i) {
                l.push_back(value_at(limits, depth + 1));
            }
            return Value::list(std::move(l));
        }
        case 0x07: {
            if (depth + 1 > limits.max_depth) {
                throw Error(ErrorCode::DepthExceeded, "nesting deeper than " + std::to_string(limits.max_depth));
            }
            auto n = u32();
            if (n > remaining()) malformed("map count exceeds input");
            Map m;
            const std::string* prev = nullptr;
            for (std::uint32_t i = 0; i < n; ++i) {
                auto key = str();
                if (prev != nullptr && !(*prev < key)) {
                    malformed("map keys not strictly ascending");
                }
                auto [it, inserted] = m.emplace(std::move(key), value_at(limits, depth + 1));
                prev = &it->first;
            }
            return Value::map(std::move(m));
        }
        default: malformed("unknown value tag");
    }
}

// ---------------------------------------------------------------------------

Bytes encode_value(const Value& v, const CodecLimits& limits) {
    ByteWriter w(limits.max_bytes);
    w.value(v, limits);
    return std::move(w).take();
}

Value decode_value(std::span<const std::uint8_t> bytes, const CodecLimits& limits) {
    if (bytes.size() > limits.max_bytes) {
        throw Error(ErrorCode::SizeExceeded, "encoded value larger than limit");
    }
    ByteReader r(bytes);
    auto v = r.value(limits);
    r.expect_done();
    return v;
}

}// namespace elastikit
