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

#ifndef ELASTIKIT_CORE_IDS_HPP
#define ELASTIKIT_CORE_IDS_HPP

#include <array>
#include <atomic>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace elastikit {

std::string to_hex(std::span<const std::uint8_t> bytes);
std::optional<std::array<std::uint8_t, 16>> parse_hex16(std::string_view hex);

/// 128-bit opaque identifier. The tag keeps object and host ids apart at
/// compile time; both serialize to exactly 16 bytes.
template <typename Tag>
class Id128 {
  public:
    static constexpr std::size_t kSize = 16;

    constexpr Id128() = default;
    explicit constexpr Id128(std::array<std::uint8_t, kSize> bytes) : bytes_(bytes) {}

    static constexpr Id128 from_parts(std::uint64_t high, std::uint64_t low) {
        std::array<std::uint8_t, kSize> b{};
        for (int i = 0; i < 8; ++i) {
            b[7 - i] = static_cast<std::uint8_t>(high >> (8 * i));
            b[15 - i] = static_cast<std::uint8_t>(low >> (8 * i));
        }
        return Id128{b};
    }

    static std::optional<Id128> from_hex(std::string_view hex) {
        if (auto parsed = parse_hex16(hex)) {
            return Id128{*parsed};
        }
        return std::nullopt;
    }

    [[nodiscard]] constexpr const std::array<std::uint8_t, kSize>& bytes() const { return bytes_; }
    [[nodiscard]] std::string hex() const { return to_hex(bytes_); }
    [[nodiscard]] constexpr bool is_nil() const { return bytes_ == std::array<std::uint8_t, kSize>{}; }

    constexpr auto operator<=>(const Id128&) const = default;

  private:
    std::array<std::uint8_t, kSize> bytes_{};
};

struct ObjectIdTag;
struct HostIdTag;
using CloudObjectId = Id128<ObjectIdTag>;
using CloudHostId = Id128<HostIdTag>;

/// Issues ids as (random salt, counter). Ids from one generator are never
/// reused and sort in issue order, which gives "lowest id" tie-breaks a
/// stable meaning.
class IdGenerator {
  public:
    IdGenerator();
    explicit IdGenerator(std::uint64_t salt) : salt_(salt) {}

    template <typename Id>
    Id next() {
        return Id::from_parts(salt_, counter_.fetch_add(1, std::memory_order_relaxed) + 1);
    }

  private:
    std::uint64_t salt_;
    std::atomic<std::uint64_t> counter_{0};
};

}// namespace elastikit

template <typename Tag>
struct std::hash<elastikit::Id128<Tag>> {
    std::size_t operator()(const elastikit::Id128<Tag>& id) const noexcept {
        std::size_t h = 1469598103934665603ULL;
        for (auto b : id.bytes()) {
            h = (h ^ b) * 1099511628211ULL;
        }
        return h;
    }
};

#endif// ELASTIKIT_CORE_IDS_HPP
