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
#include <elastikit/wire/socket.hpp>

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace elastikit::wire {
namespace {

sockaddr_in resolve(const Endpoint& ep) {
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(ep.port);
    std::string host = ep.host == "localhost" ? "127.0.0.1" : ep.host;
    if (inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
        addrinfo hints{};
        hints.ai_family = AF_INET;
        addrinfo* res = nullptr;
        if (getaddrinfo(host.c_str(), nullptr, &hints, &res) != 0 || res == nullptr) {
            throw Error(ErrorCode::InvalidConfig, "cannot resolve host " + ep.host);
        }
        addr.sin_addr = reinterpret_cast<sockaddr_in*>(res->ai_addr)->sin_addr;
        freeaddrinfo(res);
    }
    return addr;
}

}// namespace

Endpoint Endpoint::parse(std::string_view text) {
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
        throw Error(ErrorCode::InvalidConfig, "endpoint must be host:port, got '" + std::string(text) + "'");
    }
    Endpoint ep;
    ep.host = std::string(text.substr(0, colon));
    unsigned long port = 0;
    for (char c : text.substr(colon + 1)) {
        if (c < '0' || c > '9') {
            throw Error(ErrorCode::InvalidConfig, "bad port in '" + std::string(text) + "'");
        }
        port = port * 10 + static_cast<unsigned long>(c - '0');
        if (port > 65535) {
            throw Error(ErrorCode::InvalidConfig, "port out of range in '" + std::string(text) + "'");
        }
    }
    ep.port = static_cast<std::uint16_t>(port);
    return ep;
}

Socket& Socket::operator=(Socket&& o) noexcept {
    if (this != &o) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = o.fd_;
        o.fd_ = -1;
    }
    return *this;
}

Socket::~Socket() {
    if (fd_ >= 0) ::close(fd_);
}

Socket Socket::connect(const Endpoint& ep, std::chrono::milliseconds timeout) {
    auto addr = resolve(ep);
    Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
    if (!s.valid()) {
        throw Error(ErrorCode::ConnectionClosed, std::string("socket: ") + std::strerror(errno));
    }
    int flags = fcntl(s.fd_, F_GETFL, 0);
    fcntl(s.fd_, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(s.fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr);
    if (rc != 0 && errno != EINPROGRESS) {
        throw Error(ErrorCode::ConnectionClosed, "connect " + ep.to_string() + ": " + std::strerror(errno));
    }
    if (rc != 0) {
        pollfd pfd{s.fd_, POLLOUT, 0};
        rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
        int err = 0;
        socklen_t len = sizeof err;
        getsockopt(s.fd_, SOL_SOCKET, SO_ERROR, &err, &len);
        if (rc <= 0 || err != 0) {
            throw Error(ErrorCode::ConnectionClosed,
                        "connect " + ep.to_string() + ": " + (rc <= 0 ? "timeout" : std::strerror(err)));
        }
    }
    fcntl(s.fd_, F_SETFL, flags);
    int one = 1;
    setsockopt(s.fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    return s;
}

void Socket::send_all(std::span<const std::uint8_t> data) const {
    std::size_t sent = 0;
    while (sent < data.size()) {
        auto n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
        if (n < 0 && errno == EINTR) continue;
        if (n <= 0) {
            throw Error(ErrorCode::ConnectionClosed, std::string("send: ") + std::strerror(errno));
        }
        sent += static_cast<std::size_t>(n);
    }
}

std::size_t Socket::recv_some(std::span<std::uint8_t> buf) const {
    while (true) {
        auto n = ::recv(fd_, buf.data(), buf.size(), 0);
        if (n < 0 && errno == EINTR) continue;
        return n > 0 ? static_cast<std::size_t>(n) : 0;
    }
}

void Socket::shutdown() const {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

Listener& Listener::operator=(Listener&& o) noexcept {
    if (this != &o) {
        if (fd_ >= 0) ::close(fd_);
        fd_ = o.fd_;
        port_ = o.port_;
        o.fd_ = -1;
    }
    return *this;
}

Listener::~Listener() {
    if (fd_ >= 0) ::close(fd_);
}

Listener Listener::bind(const Endpoint& ep) {
    sockaddr_in addr{};
    try {
        addr = resolve(ep);
    } catch (const Error& e) {
        throw Error(ErrorCode::BindFailure, e.detail());
    }
    Listener l;
    l.fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
    if (l.fd_ < 0) {
        throw Error(ErrorCode::BindFailure, std::string("socket: ") + std::strerror(errno));
    }
    int one = 1;
    setsockopt(l.fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
    if (::bind(l.fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(l.fd_, 64) != 0) {
        throw Error(ErrorCode::BindFailure, ep.to_string() + ": " + std::strerror(errno));
    }
    socklen_t len = sizeof addr;
    getsockname(l.fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    l.port_ = ntohs(addr.sin_port);
    return l;
}

Socket Listener::accept() const {
    while (true) {
        int fd = ::accept4(fd_, nullptr, nullptr, SOCK_CLOEXEC);
        if (fd >= 0) {
            int one = 1;
            setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
            return Socket(fd);
        }
        if (errno == EINTR || errno == ECONNABORTED) continue;
        return Socket();
    }
}

void Listener::shutdown() const {
    if (fd_ >= 0) ::shutdown(fd_, SHUT_RDWR);
}

std::uint16_t pick_free_port() {
    auto l = Listener::bind(Endpoint{"127.0.0.1", 0});
    return l.port();
}

}// namespace elastikit::wire
