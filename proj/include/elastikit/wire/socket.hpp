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

#ifndef ELASTIKIT_WIRE_SOCKET_HPP
#define ELASTIKIT_WIRE_SOCKET_HPP

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

namespace elastikit::wire {

struct Endpoint {
    std::string host = "127.0.0.1";
    std::uint16_t port = 0;

    /// "host:port"; throws InvalidConfig on bad syntax.
    static Endpoint parse(std::string_view text);
    [[nodiscard]] std::string to_string() const { return host + ":" + std::to_string(port); }
};

/// Move-only owner of a connected TCP socket.
class Socket {
  public:
    Socket() = default;
    explicit Socket(int fd) : fd_(fd) {}
    Socket(Socket&& o) noexcept : fd_(o.fd_) { o.fd_ = -1; }
    Socket& operator=(Socket&& o) noexcept;
    Socket(const Socket&) = delete;
    Socket& operator=(const Socket&) = delete;
    ~Socket();

    /// Throws ConnectionClosed if the peer cannot be reached in time.
    static Socket connect(const Endpoint& ep, std::chrono::milliseconds timeout = std::chrono::seconds(5));

    [[nodiscard]] bool valid() const { return fd_ >= 0; }
    [[nodiscard]] int fd() const { return fd_; }

    /// Throws ConnectionClosed on failure.
    void send_all(std::span<const std::uint8_t> data) const;
    /// Returns 0 at end of stream or on error.
    std::size_t recv_some(std::span<std::uint8_t> buf) const;
    /// Wakes any thread blocked in recv; the descriptor stays open.
    void shutdown() const;

  private:
    int fd_ = -1;
};

class Listener {
  public:
    /// Throws BindFailure.
    static Listener bind(const Endpoint& ep);

    Listener() = default;
    Listener(Listener&& o) noexcept : fd_(o.fd_), port_(o.port_) { o.fd_ = -1; }
    Listener& operator=(Listener&& o) noexcept;
    Listener(const Listener&) = delete;
    Listener& operator=(const Listener&) = delete;
    ~Listener();

    [[nodiscard]] std::uint16_t port() const { return port_; }
    /// Blocks; returns an invalid socket once shutdown() was called.
    Socket accept() const;
    void shutdown() const;

  private:
    int fd_ = -1;
    std::uint16_t port_ = 0;
};

/// Asks the kernel for a currently unused loopback port.
std::uint16_t pick_free_port();

}// namespace elastikit::wire

#endif// ELASTIKIT_WIRE_SOCKET_HPP
