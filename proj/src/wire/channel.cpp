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

#include <elastikit/wire/channel.hpp>

namespace elastikit::wire {

Channel::Channel(Socket socket, RequestHandler on_request, CloseHandler on_close, CodecLimits limits)
    : socket_(std::move(socket)), on_request_(std::move(on_request)), on_close_(std::move(on_close)),
      limits_(limits) {}

std::shared_ptr<Channel> Channel::start(Socket socket, RequestHandler on_request, CloseHandler on_close,
                                        CodecLimits limits) {
    std::shared_ptr<Channel> ch(new Channel(std::move(socket), std::move(on_request), std::move(on_close), limits));
    ch->reader_ = std::thread(&Channel::read_loop, ch.get(), ch);
    return ch;
}

Channel::~Channel() {
    socket_.shutdown();
    if (reader_.joinable()) {
        if (reader_.get_id() == std::this_thread::get_id()) {
            reader_.detach();
        } else {
            reader_.join();
        }
    }
}

void Channel::close() {
    open_ = false;
    socket_.shutdown();
}

void Channel::write_frame(const Message& m, std::uint64_t request_id) {
    auto frame = encode_frame(m, request_id, limits_);
    std::lock_guard lock(write_mu_);
    if (!open_) {
        throw Error(ErrorCode::ConnectionClosed, "channel closed");
    }
    try {
        socket_.send_all(frame);
    } catch (const Error&) {
        open_ = false;
        socket_.shutdown();
        throw;
    }
    sent_[frame[4]].fetch_add(1);
}

Message Channel::call(const Message& request, std::optional<std::chrono::milliseconds> timeout) {
    auto id = next_id_.fetch_add(1);
    std::future<Message> fut;
    {
        std::lock_guard lock(pending_mu_);
        if (!open_) {
            throw Error(ErrorCode::ConnectionClosed, "channel closed");
        }
        fut = pending_[id].get_future();
    }
    try {
        write_frame(request, id);
    } catch (...) {
        std::lock_guard lock(pending_mu_);
        pending_.erase(id);
        throw;
    }
    if (timeout && fut.wait_for(*timeout) != std::future_status::ready) {
        std::lock_guard lock(pending_mu_);
        pending_.erase(id);
        throw Error(ErrorCode::ConnectionClosed, "response timeout");
    }
    return fut.get();
}

void Channel::reply(std::uint64_t request_id, const Message& response) { write_frame(response, request_id); }

void Channel::notify(const Message& message) { write_frame(message, 0); }

void Channel::fail_pending() {
    std::unordered_map<std::uint64_t, std::promise<Message>> pending;
    {
        std::lock_guard lock(pending_mu_);
        open_ = false;
        pending.swap(pending_);
    }
    for (auto& [id, p] : pending) {
        p.set_exception(std::make_exception_ptr(Error(ErrorCode::ConnectionClosed, "connection lost")));
    }
}

void Channel::read_loop(std::shared_ptr<Channel> self) {
    FrameDecoder decoder(limits_);
    std::array<std::uint8_t, 64 * 1024> buf{};
    try {
        while (true) {
            auto n = socket_.recv_some(buf);
            if (n == 0) {
                break;
            }
            decoder.feed(std::span(buf.data(), n));
            while (auto frame = decoder.next()) {
                auto type = type_of(frame->message);
                received_[static_cast<std::uint8_t>(type)].fetch_add(1);
                if (is_response(type)) {
                    std::promise<Message> p;
                    bool found = false;
                    {
                        std::lock_guard lock(pending_mu_);
                        if (auto it = pending_.find(frame->request_id); it != pending_.end()) {
                            p = std::move(it->second);
                            pending_.erase(it);
                            found = true;
                        }
                    }
                    if (found) {
                        p.set_value(std::move(frame->message));
                    }
                } else if (on_request_) {
                    on_request_(self, std::move(*frame));
                }
            }
        }
    } catch (const std::exception&) {
        // malformed input: drop the connection
    }
    socket_.shutdown();
    fail_pending();
    if (on_close_) {
        on_close_();
    }
    on_request_ = nullptr;
    on_close_ = nullptr;
}

}// namespace elastikit::wire
