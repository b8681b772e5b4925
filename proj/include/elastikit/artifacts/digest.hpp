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

#ifndef ELASTIKIT_ARTIFACTS_DIGEST_HPP
#define ELASTIKIT_ARTIFACTS_DIGEST_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace elastikit::artifacts {

/// SHA-256 of a payload; the content address of an artifact.
class Digest {
  public:
    static constexpr std::size_t kSize = 32;

    Digest() = default;
    explicit Digest(std::array<std::uint8_t, kSize> bytes) : bytes_(bytes) {}

    static Digest of(std::span<const std::uint8_t> payload);
    static Digest of(std::string_view payload);
    static std::optional<Digest> from_hex(std::string_view hex);

    [[nodiscard]] const std::array<std::uint8_t, kSize>& bytes() const { return bytes_; }
    /// Lowercase hex, the form used in logs.
    [[nodiscard]] std::string hex() const;

    auto operator<=>(const Digest&) const = default;

  private:
    std::array<std::uint8_t, kSize> bytes_{};
};

}// namespace elastikit::artifacts

template <>
struct std::hash<elastikit::artifacts::Digest> {
    std::size_t operator()(const elastikit::artifacts::Digest& d) const noexcept {
        std::size_t h = 0;
        for (std::size_t i = 0; i < sizeof(std::size_t); ++i) {
            h = (h << 8) | d.bytes()[i];
        }
        return h;
    }
};

#endif// ELASTIKIT_ARTIFACTS_DIGEST_HPP
