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

#ifndef ELASTIKIT_CORE_ERROR_HPP
#define ELASTIKIT_CORE_ERROR_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace elastikit {

/// Error codes shared by every module. The numeric value is what travels in
/// Err frames, so existing entries must keep their numbers.
enum class ErrorCode : std::uint16_t {
    Internal = 0,
    // codec / wire
    DepthExceeded = 1,
    SizeExceeded = 2,
    MalformedEncoding = 3,
    MalformedFrame = 4,
    UnknownMsgType = 5,
    ConnectionClosed = 6,
    TypeMismatch = 7,
    // hostd
    BindFailure = 10,
    UnknownClass = 11,
    DuplicateCO = 12,
    ConstructorFailed = 13,
    UnknownCO = 14,
    UnknownMethod = 15,
    ArityMismatch = 16,
    ApplicationError = 17,
    UnknownField = 18,
    NotQuiescent = 19,
    SnapshotUnsupported = 20,
    RegistryMismatch = 21,
    // manager
    PolicyError = 30,
    ProvisionFailed = 31,
    DeployFailed = 32,
    ObjectDestroyed = 33,
    HostUnreachable = 34,
    DestUnreachable = 35,
    InvalidConfig = 36,
    // policy
    PolicyTimeout = 40,
    PolicyPanic = 41,
    // backend
    QuotaExceeded = 50,
    StartTimeout = 51,
    SpawnFailure = 52,
    UnknownHost = 53,
    // artifacts
    UnknownDigest = 60,
    VerificationFailed = 61,
    OriginUnreachable = 62,
    // events
    DuplicateMetric = 70,
    InvalidStatement = 71,
    UnknownMetric = 72,
    QueueFull = 73,
    MalformedLog = 74,
};

std::string_view to_string(ErrorCode code) noexcept;
std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept;
std::optional<ErrorCode> error_code_from_wire(std::uint16_t raw) noexcept;

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, std::string detail);

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

  private:
    ErrorCode code_;
    std::string detail_;
};

}// namespace elastikit

#endif// ELASTIKIT_CORE_ERROR_HPP
