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

#ifndef ELASTIKIT_CORE_CLOCK_HPP
#define ELASTIKIT_CORE_CLOCK_HPP

#include <atomic>
#include <chrono>
#include <cstdint>

namespace elastikit {

/// Millisecond time source. Both implementations are monotonic.
class Clock {
  public:
    virtual ~Clock() = default;
    [[nodiscard]] virtual std::int64_t now_ms() const = 0;
    [[nodiscard]] virtual bool is_virtual() const { return false; }
};

/// Wall-clock milliseconds since construction.
class SteadyClock final : public Clock {
  public:
    SteadyClock() : start_(std::chrono::steady_clock::now()) {}

    [[nodiscard]] std::int64_t now_ms() const override {
        return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

/// Manually driven clock for deterministic simulation.
class VirtualClock final : public Clock {
  public:
    [[nodiscard]] std::int64_t now_ms() const override { return now_.load(std::memory_order_acquire); }
    [[nodiscard]] bool is_virtual() const override { return true; }

    /// Never moves backwards; earlier targets are ignored.
    void set(std::int64_t t) {
        auto cur = now_.load();
        while (t > cur && !now_.compare_exchange_weak(cur, t)) {
        }
    }

  private:
    std::atomic<std::int64_t> now_{0};
};

}// namespace elastikit

#endif// ELASTIKIT_CORE_CLOCK_HPP
