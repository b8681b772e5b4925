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

#include <elastikit/artifacts/digest.hpp>
#include <elastikit/core/error.hpp>
#include <elastikit/core/ids.hpp>

#include <openssl/evp.h>

#include <memory>

namespace elastikit::artifacts {

Digest Digest::of(std::span<const std::uint8_t> payload) {
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<std::uint8_t, kSize> out{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
        EVP_DigestUpdate(ctx.get(), payload.data(), payload.size()) != 1 ||
        EVP_DigestFinal_ex(ctx.get(), out.data(), &len) != 1 || len != kSize) {
        throw Error(ErrorCode::Internal, "sha256 failed");
    }
    return Digest{out};
}

Digest Digest::of(std::string_view payload) {
    return of(std::span<const std::uint8_t>{reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size()});
}

std::optional<Digest> Digest::from_hex(std::string_view hex) {
    if (hex.size() != 2 * kSize) {
        return std::nullopt;
    }
    std::array<std::uint8_t, kSize> out{};
    for (std::size_t half = 0; half < 2; ++half) {
        auto part = parse_hex16(hex.substr(half * 32, 32));
        if (!part) return std::nullopt;
        std::copy(part->begin(), part->end(), out.begin() + static_cast<std::ptrdiff_t>(half * 16));
    }
    return Digest{out};
}

std::string Digest::hex() const { return to_hex(bytes_); }

}// namespace elastikit::artifacts
