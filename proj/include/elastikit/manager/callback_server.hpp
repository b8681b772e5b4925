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

#ifndef ELASTIKIT_MANAGER_CALLBACK_SERVER_HPP
#define ELASTIKIT_MANAGER_CALLBACK_SERVER_HPP

#include <elastikit/artifacts/artifacts.hpp>
#include <elastikit/events/bus.hpp>
#include <elastikit/wire/channel.hpp>
#include <elastikit/wire/gate.hpp>

#include <atomic>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <vector>

namespace elastikit::manager {

/// The authoritative global variables. Each operation is atomic on its own;
/// nothing makes a get followed by a set atomic.
class GlobalStore {
  public:
    /// Null for names never set.
    [[nodiscard]] Value get(const std::string& name) const;
    void set(const std::string& name, Value value);

  private:
    mutable std::mutex mu_;
    std::map<std::string, Value> values_;
};

/// Listens for host-initiated links: globals, artifact fetches and pushed
/// events. Hosts must greet with the manager's registry digest.
class CallbackServer {
  public:
    CallbackServer(const wire::Endpoint& listen, const artifacts::Digest& registry_digest, events::EventBus& bus,
                   GlobalStore& globals, const artifacts::ArtifactStore& artifacts);
    ~CallbackServer();
    CallbackServer(const CallbackServer&) = delete;
    CallbackServer& operator=(const CallbackServer&) = delete;

    [[nodiscard]] wire::Endpoint endpoint() const { return endpoint_; }

    /// ArtifactFetch frames answered with data, summed over all links.
    [[nodiscard]] std::uint64_t artifact_fetches() const { return fetches_.load(); }

    void shutdown();

  private:
    void accept_loop();
    void on_frame(const std::shared_ptr<wire::Channel>& ch, wire::DecodedFrame frame);

    artifacts::Digest digest_;
    events::EventBus& bus_;
    GlobalStore& globals_;
    const artifacts::ArtifactStore& artifacts_;
    wire::Listener listener_;
    wire::Endpoint endpoint_;
    std::atomic<bool> running_{true};
    std::atomic<std::uint64_t> fetches_{0};

    std::mutex mu_;
    std::vector<std::weak_ptr<wire::Channel>> links_;
    std::set<const wire::Channel*> greeted_;
    std::shared_ptr<wire::HandlerGate> gate_ = std::make_shared<wire::HandlerGate>();
    std::thread acceptor_;
};

}// namespace elastikit::manager

#endif// ELASTIKIT_MANAGER_CALLBACK_SERVER_HPP
