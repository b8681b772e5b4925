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

#ifndef ELASTIKIT_ARTIFACTS_ARTIFACTS_HPP
#define ELASTIKIT_ARTIFACTS_ARTIFACTS_HPP

#include <elastikit/artifacts/digest.hpp>
#include <elastikit/core/value.hpp>

#include <cstddef>
#include <future>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace elastikit::artifacts {

inline constexpr std::size_t kMaxArtifactBytes = 64u * 1024u * 1024u;
inline constexpr std::size_t kDefaultCacheBudget = 256u * 1024u * 1024u;

using Payload = std::shared_ptr<const Bytes>;

/// Where a cache gets missing payloads from. Implementations throw
/// UnknownDigest when the origin has no such artifact and
/// OriginUnreachable when it cannot be asked.
class ArtifactOrigin {
  public:
    virtual ~ArtifactOrigin() = default;
    virtual Bytes fetch(const Digest& digest) = 0;
};

/// The manager-side origin: payloads keyed by their SHA-256.
class ArtifactStore {
  public:
    explicit ArtifactStore(std::size_t max_payload = kMaxArtifactBytes) : max_payload_(max_payload) {}

    /// Idempotent; throws SizeExceeded above the payload limit.
    Digest publish(std::span<const std::uint8_t> payload);
    Digest publish(std::string_view payload);

    [[nodiscard]] Payload get(const Digest& digest) const;
    [[nodiscard]] std::size_t count() const;

  private:
    std::size_t max_payload_;
    mutable std::mutex mu_;
    std::unordered_map<Digest, Payload> payloads_;
};

/// In-process origin over a store.
class StoreOrigin final : public ArtifactOrigin {
  public:
    explicit StoreOrigin(const ArtifactStore& store) : store_(store) {}
    Bytes fetch(const Digest& digest) override;

  private:
    const ArtifactStore& store_;
};

/// Per-host content-addressed cache with LRU eviction above a byte budget.
///
/// Only payloads whose SHA-256 matches their key are stored. A hit never
/// touches the origin; concurrent misses on one digest share a single
/// origin request.
class ArtifactCache {
  public:
    explicit ArtifactCache(ArtifactOrigin& origin, std::size_t budget_bytes = kDefaultCacheBudget);

    /// Throws UnknownDigest, OriginUnreachable, or VerificationFailed
    /// (payload discarded, cache unchanged).
    Payload fetch(const Digest& digest);

    [[nodiscard]] bool contains(const Digest& digest) const;
    [[nodiscard]] std::size_t bytes_cached() const;
    [[nodiscard]] std::size_t entries() const;
    /// Digests in eviction order, least recently used first.
    [[nodiscard]] std::vector<Digest> lru_order() const;

  private:
    struct Entry {
        Payload payload;
        std::list<Digest>::iterator position;
    };

    Payload fetch_from_origin(const Digest& digest);
    void insert_locked(const Digest& digest, const Payload& payload);

    ArtifactOrigin& origin_;
    std::size_t budget_;
    mutable std::mutex mu_;
    std::unordered_map<Digest, Entry> entries_;
    std::list<Digest> recency_;// front = least recent
    std::size_t bytes_ = 0;
    std::unordered_map<Digest, std::shared_future<Payload>> in_flight_;
};

}// namespace elastikit::artifacts

#endif// ELASTIKIT_ARTIFACTS_ARTIFACTS_HPP
