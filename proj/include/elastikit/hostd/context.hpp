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

#ifndef ELASTIKIT_HOSTD_CONTEXT_HPP
#define ELASTIKIT_HOSTD_CONTEXT_HPP

#include <elastikit/artifacts/artifacts.hpp>
#include <elastikit/core/ids.hpp>
#include <elastikit/core/value.hpp>

#include <cstdint>
#include <string>

namespace elastikit::hostd {

/// What a cloud object can reach from inside a constructor, method or
/// field accessor. Host-local statics are not allowed in registered
/// classes; shared mutable state goes through the global store.
class InvocationContext {
  public:
    virtual ~InvocationContext() = default;

    [[nodiscard]] virtual CloudObjectId self() const = 0;
    [[nodiscard]] virtual CloudHostId host() const = 0;

    /// Reads and writes against the manager's authoritative store.
    virtual Value global_get(const std::string& name) = 0;
    virtual void global_set(const std::string& name, Value value) = 0;

    /// Emits a "custom.*" event into the monitoring stream.
    virtual void emit(const std::string& type, Map properties) = 0;

    /// Content-addressed payload, fetched at most once per host.
    virtual artifacts::Payload fetch_artifact(const artifacts::Digest& digest) = 0;

    /// Consumes `ms` milliseconds of execution time. Real hosts spin,
    /// simulated hosts only account for it.
    virtual void work(std::int64_t ms) = 0;
};

}// namespace elastikit::hostd

#endif// ELASTIKIT_HOSTD_CONTEXT_HPP
