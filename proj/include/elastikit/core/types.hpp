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

#ifndef ELASTIKIT_CORE_TYPES_HPP
#define ELASTIKIT_CORE_TYPES_HPP

#include <elastikit/core/ids.hpp>
#include <elastikit/core/value.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace elastikit {

enum class PassingMode : std::uint8_t { ByValue = 0, ByReference = 1 };

enum class ObjectState : std::uint8_t { Scheduling, Deployed, Migrating, Destroyed };

std::string_view to_string(PassingMode mode) noexcept;
std::string_view to_string(ObjectState state) noexcept;

/// Identity and residency of one cloud object. resident_on is set exactly
/// when the object is Deployed or Migrating.
struct CloudObjectDescriptor {
    CloudObjectId id;
    std::string class_name;
    std::optional<CloudHostId> resident_on;
    ObjectState state = ObjectState::Scheduling;

    [[nodiscard]] bool residency_consistent() const {
        bool placed = state == ObjectState::Deployed || state == ObjectState::Migrating;
        return placed == resident_on.has_value();
    }
};

/// Checks a value against a declared passing mode: ByValue trees must not
/// carry Refs, ByReference positions must hold exactly one Ref.
[[nodiscard]] bool conforms_to(const Value& v, PassingMode mode);

}// namespace elastikit

#endif// ELASTIKIT_CORE_TYPES_HPP
