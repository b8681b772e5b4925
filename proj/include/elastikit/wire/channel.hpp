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

#ifndef ELASTIKIT_WIRE_CHANNEL_HPP
#define ELASTIKIT_WIRE_CHANNEL_HPP

#include <elastikit/wire/frame.hpp>
#include <elastikit/wire/socket.hpp>

#include <array>
#include <atomic>
#include <chrono>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <unordered_map>

namespace elastikit::wire {

/// A framed, pipelined, bidirectional connection.
///
/// One reader thread decodes frames. Responses (Ok/Err/ArtifactData) wake
/// the matching call(); everything else goes to the request handler, which
/// runs on the reader thread and must not block for long. Writes from any
/// thread are serialized. Request ids start at 1; id 0 marks one-way
/// notifications.
///
/// The reader thread keeps the channel alive until the socket closes, so
/// owners must call close() to release it.
class Channel : public std::enable_shared_from_this<Channel> {
  public:
    using RequestHandler = std::function<void(const std::shared_ptr<Channel>&, DecodedFrame)>;
    using CloseHandler = std::function<void()>;

    static std::shared_ptr<Channel> start(Socket socket, RequestHandler on_request, CloseHandler on_close = {},
                                          CodecLimits limits = {});

    ~Channel();
    Channel(const Channel&) = delete;
    Channel& operator=(const Channel&) = delete;

    /// Sends a request and blocks for its response. Throws ConnectionClosed
    /// if the connection drops (or the timeout passes) first.
    Message call(const Message& request, std::optional<std::chrono::milliseconds> timeout = std::nullopt);

    void reply(std::uint64_t request_id, const Message& response);
    void notify(const Message& message);

    void close();
    [[nodiscard]] bool is_open() const { return open_.load(); }

    /// Frames written by this side, per msg_type byte.
    [[nodiscard]] std::uint64_t frames_sent(MsgType t) const { return sent_[static_cast<std::uint8_t>(t)].load(); }
    [[nodiscard]] std::uint64_t frames_received(MsgType t) const {
        return received_[static_cast<std::uint8_t>(t)].load();
    }

  private:
    Channel(Socket socket, RequestHandler on_request, CloseHandler on_close, CodecLimits limits);

    void read_loop(std::shared_ptr<Channel> self);
    void write_frame(const Message& m, std::uint64_t request_id);
    void fail_pending();

    Socket socket_;
    RequestHandler on_request_;
    CloseHandler on_close_;
    CodecLimits limits_;
    std::atomic<bool> open_{true};
    std::mutex write_mu_;
    std::mutex pending_mu_;
    std::unordered_map<std::uint64_t, std::promise<Message>> pending_;
    std::atomic<std::uint64_t> next_id_{1};
    std::array<std::atomic<std::uint64_t>, 256> sent_{};
    std::array<std::atomic<std::uint64_t>, 256> received_{};
    std::thread reader_;
};

}// namespace elastikit::wire

#endif// ELASTIKIT_WIRE_CHANNEL_HPP
