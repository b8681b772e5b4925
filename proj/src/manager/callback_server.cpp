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

#include <elastikit/core/error.hpp>
#include <elastikit/manager/callback_server.hpp>

namespace elastikit::manager {

Value GlobalStore::get(const std::string& name) const {
    std::lock_guard lock(mu_);
    auto it = values_.find(name);
    return it == values_.end() ? Value::null() : it->second;
}

void GlobalStore::set(const std::string& name, Value value) {
    std::lock_guard lock(mu_);
    values_.insert_or_assign(name, std::move(value));
}

namespace {

void safe_reply(const std::shared_ptr<wire::Channel>& ch, std::uint64_t rid, const wire::Message& m) {
    try {
        ch->reply(rid, m);
    } catch (const Error&) {
    }
}

}// namespace

CallbackServer::CallbackServer(const wire::Endpoint& listen, const artifacts::Digest& registry_digest,
                               events::EventBus& bus, GlobalStore& globals, const artifacts::ArtifactStore& artifacts)
    : digest_(registry_digest), bus_(bus), globals_(globals), artifacts_(artifacts),
      listener_(wire::Listener::bind(listen)), endpoint_{listen.host, listener_.port()} {
    acceptor_ = std::thread(&CallbackServer::accept_loop, this);
}

CallbackServer::~CallbackServer() { shutdown(); }

void CallbackServer::shutdown() {
    if (!running_.exchange(false)) return;
    listener_.shutdown();
    if (acceptor_.joinable()) acceptor_.join();
    std::vector<std::shared_ptr<wire::Channel>> links;
    {
        std::lock_guard lock(mu_);
        for (auto& w : links_) {
            if (auto c = w.lock()) links.push_back(std::move(c));
        }
        links_.clear();
    }
    for (auto& c : links) c->close();
    gate_->close();
}

void CallbackServer::accept_loop() {
    while (running_) {
        auto sock = listener_.accept();
        if (!sock.valid()) break;
        auto gate = gate_;
        auto ch = wire::Channel::start(std::move(sock),
                                       [gate, this](const std::shared_ptr<wire::Channel>& c, wire::DecodedFrame f) {
                                           if (auto pass = gate->enter()) on_frame(c, std::move(f));
                                       });
        std::lock_guard lock(mu_);
        std::erase_if(links_, [](auto& w) { return w.expired(); });
        links_.push_back(ch);
    }
}

void CallbackServer::on_frame(const std::shared_ptr<wire::Channel>& ch, wire::DecodedFrame frame) {
    auto rid = frame.request_id;
    if (auto const* hello = std::get_if<wire::Hello>(&frame.message)) {
        if (hello->version != wire::kProtocolVersion || hello->registry_digest != digest_.bytes()) {
            safe_reply(ch, rid, wire::Err{ErrorCode::RegistryMismatch, "class registry digest differs"});
            ch->close();
            return;
        }
        {
            std::lock_guard lock(mu_);
            greeted_.insert(ch.get());
        }
        safe_reply(ch, rid, wire::Ok{});
        return;
    }
    {
        std::lock_guard lock(mu_);
        if (!greeted_.contains(ch.get())) {
            if (rid != 0) safe_reply(ch, rid, wire::Err{ErrorCode::RegistryMismatch, "handshake required"});
            return;
        }
    }
    std::visit(
        [&](auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, wire::EventPush>) {
                bus_.emit(std::move(m.event));
            } else if constexpr (std::is_same_v<M, wire::GlobalGet>) {
                safe_reply(ch, rid, wire::Ok{globals_.get(m.name)});
            } else if constexpr (std::is_same_v<M, wire::GlobalSet>) {
                globals_.set(m.name, std::move(m.value));
                safe_reply(ch, rid, wire::Ok{});
            } else if constexpr (std::is_same_v<M, wire::ArtifactFetch>) {
                auto payload = artifacts_.get(m.digest);
                if (!payload) {
                    safe_reply(ch, rid, wire::Err{ErrorCode::UnknownDigest, m.digest.hex()});
                    return;
                }
                try {
                    ch->reply(rid, wire::ArtifactData{m.digest, *payload});
                    ++fetches_;
                } catch (const Error& e) {
                    // Too large for one frame, or the link is already gone.
                    safe_reply(ch, rid, wire::Err{e.code(), e.detail()});
                }
            } else if (rid != 0) {
                safe_reply(ch, rid, wire::Err{ErrorCode::UnknownMsgType, "not served on the callback link"});
            }
        },
        frame.message);
}

}// namespace elastikit::manager
