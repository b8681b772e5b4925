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

#ifndef ELASTIKIT_WIRE_GATE_HPP
#define ELASTIKIT_WIRE_GATE_HPP

#include <mutex>
#include <shared_mutex>

namespace elastikit::wire {

/// Lets channel handlers outlive their owner safely. Handlers run under
/// enter(); close() waits for running handlers and turns later ones away.
class HandlerGate {
  public:
    /// Holds the gate shared; false means the owner is gone.
    class Pass {
      public:
        explicit Pass(HandlerGate& g) : lock_(g.mu_), open_(g.open_) {}
        explicit operator bool() const { return open_; }

      private:
        std::shared_lock<std::shared_mutex> lock_;
        bool open_;
    };

    Pass enter() { return Pass(*this); }

    void close() {
        std::unique_lock lock(mu_);
        open_ = false;
    }

  private:
    std::shared_mutex mu_;
    bool open_ = true;
};

}// namespace elastikit::wire

#endif// ELASTIKIT_WIRE_GATE_HPP
