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

#include <elastikit/artifacts/artifacts.hpp>
#include <elastikit/core/error.hpp>

namespace elastikit::artifacts {

Digest ArtifactStore::publish(std::span<const std::uint8_t> payload) {
    if (payload.size() > max_payload_) {
        throw Error(ErrorCode::SizeExceeded,
                    "artifact of " + std::to_string(payload.size()) + " bytes exceeds " + std::to_string(max_payload_));
    }
    auto digest = Digest::of(payload);
    std::lock_guard lock(mu_);
    if (!payloads_.contains(digest)) {
        payloads_.emplace(digest, std::make_shared<const Bytes>(payload.begin(), payload.end()));
    }
    return digest;
}

Digest ArtifactStore::publish(std::string_view payload) {
    return publish(std::span<const std::uint8_t>{reinterpret_cast<const std::uint8_t*>(payload.data()), payload.size()});
}

Payload ArtifactStore::get(const Digest& digest) const {
    std::lock_guard lock(mu_);
    auto it = payloads_.find(digest);
    return it == payloads_.end() ? nullptr : it->second;
}

std::size_t ArtifactStore::count() const {
    std::lock_guard lock(mu_);
    return payloads_.size();
}

Bytes StoreOrigin::fetch(const Digest& digest) {
    auto p = store_.get(digest);
    if (!p) {
        throw Error(ErrorCode::UnknownDigest, digest.hex());
    }
    return *p;
}

ArtifactCache::ArtifactCache(ArtifactOrigin& origin, std::size_t budget_bytes)
    : origin_(origin), budget_(budget_bytes) {}

Payload ArtifactCache::fetch(const Digest& digest) {
    std::shared_future<Payload> pending;
    std::promise<Payload> mine;
    {
        std::lock_guard lock(mu_);
        if (auto it = entries_.find(digest); it != entries_.end()) {
            recency_.splice(recency_.end(), recency_, it->second.position);
            return it->second.payload;
        }
        if (auto it = in_flight_.find(digest); it != in_flight_.end()) {
            pending = it->second;
        } else {
            in_flight_.emplace(digest, mine.get_future().share());
        }
    }
    if (pending.valid()) {
        return pending.get();
    }

    try {
        auto payload = fetch_from_origin(digest);
        {
            std::lock_guard lock(mu_);
            insert_locked(digest, payload);
            in_flight_.erase(digest);
        }
        mine.set_value(payload);
        return payload;
    } catch (...) {
        {
            std::lock_guard lock(mu_);
            in_flight_.erase(digest);
        }
        mine.set_exception(std::current_exception());
        throw;
    }
}

Payload ArtifactCache::fetch_from_origin(const Digest& digest) {
    auto bytes = origin_.fetch(digest);
    if (Digest::of(bytes) != digest) {
        throw Error(ErrorCode::VerificationFailed, "payload does not hash to " + digest.hex());
    }
    return std::make_shared<const Bytes>(std::move(bytes));
}

void ArtifactCache::insert_locked(const Digest& digest, const Payload& payload) {
    if (payload->size() > budget_) {
        return;// verified and returned, but can never fit
    }
    while (bytes_ + payload->size() > budget_ && !recency_.empty()) {
        auto victim = recency_.front();
        recency_.pop_front();
        auto it = entries_.find(victim);
        bytes_ -= it->second.payload->size();
        entries_.erase(it);
    }
    recency_.push_back(digest);
    entries_.emplace(digest, Entry{payload, std::prev(recency_.end())});
    bytes_ += payload->size();
}

bool ArtifactCache::contains(const Digest& digest) const {
    std::lock_guard lock(mu_);
    return entries_.contains(digest);
}

std::size_t ArtifactCache::bytes_cached() const {
    std::lock_guard lock(mu_);
    return bytes_;
}

std::size_t ArtifactCache::entries() const {
    std::lock_guard lock(mu_);
    return entries_.size();
}

std::vector<Digest> ArtifactCache::lru_order() const {
    std::lock_guard lock(mu_);
    return {recency_.begin(), recency_.end()};
}

}// namespace elastikit::artifacts
