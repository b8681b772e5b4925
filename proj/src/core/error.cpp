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

#include <array>
#include <utility>

namespace elastikit {
namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 41> kNames{{
    {ErrorCode::Internal, "Internal"},
    {ErrorCode::DepthExceeded, "DepthExceeded"},
    {ErrorCode::SizeExceeded, "SizeExceeded"},
    {ErrorCode::MalformedEncoding, "MalformedEncoding"},
    {ErrorCode::MalformedFrame, "MalformedFrame"},
    {ErrorCode::UnknownMsgType, "UnknownMsgType"},
    {ErrorCode::ConnectionClosed, "ConnectionClosed"},
    {ErrorCode::TypeMismatch, "TypeMismatch"},
    {ErrorCode::BindFailure, "BindFailure"},
    {ErrorCode::UnknownClass, "UnknownClass"},
    {ErrorCode::DuplicateCO, "DuplicateCO"},
    {ErrorCode::ConstructorFailed, "ConstructorFailed"},
    {ErrorCode::UnknownCO, "UnknownCO"},
    {ErrorCode::UnknownMethod, "UnknownMethod"},
    {ErrorCode::ArityMismatch, "ArityMismatch"},
    {ErrorCode::ApplicationError, "ApplicationError"},
    {ErrorCode::UnknownField, "UnknownField"},
    {ErrorCode::NotQuiescent, "NotQuiescent"},
    {ErrorCode::SnapshotUnsupported, "SnapshotUnsupported"},
    {ErrorCode::RegistryMismatch, "RegistryMismatch"},
    {ErrorCode::PolicyError, "PolicyError"},
    {ErrorCode::ProvisionFailed, "ProvisionFailed"},
    {ErrorCode::DeployFailed, "DeployFailed"},
    {ErrorCode::ObjectDestroyed, "ObjectDestroyed"},
    {ErrorCode::HostUnreachable, "HostUnreachable"},
    {ErrorCode::DestUnreachable, "DestUnreachable"},
    {ErrorCode::InvalidConfig, "InvalidConfig"},
    {ErrorCode::PolicyTimeout, "PolicyTimeout"},
    {ErrorCode::PolicyPanic, "PolicyPanic"},
    {ErrorCode::QuotaExceeded, "QuotaExceeded"},
    {ErrorCode::StartTimeout, "StartTimeout"},
    {ErrorCode::SpawnFailure, "SpawnFailure"},
    {ErrorCode::UnknownHost, "UnknownHost"},
    {ErrorCode::UnknownDigest, "UnknownDigest"},
    {ErrorCode::VerificationFailed, "VerificationFailed"},
    {ErrorCode::OriginUnreachable, "OriginUnreachable"},
    {ErrorCode::DuplicateMetric, "DuplicateMetric"},
    {ErrorCode::InvalidStatement, "InvalidStatement"},
    {ErrorCode::UnknownMetric, "UnknownMetric"},
    {ErrorCode::QueueFull, "QueueFull"},
    {ErrorCode::MalformedLog, "MalformedLog"},
}};

}// namespace

std::string_view to_string(ErrorCode code) noexcept {
    for (auto const& [c, name] : kNames) {
        if (c == code) {
            return name;
        }
    }
    return "Unknown";
}

std::optional<ErrorCode> error_code_from_string(std::string_view name) noexcept {
    for (auto const& [c, n] : kNames) {
        if (n == name) {
            return c;
        }
    }
    return std::nullopt;
}

std::optional<ErrorCode> error_code_from_wire(std::uint16_t raw) noexcept {
    for (auto const& [c, n] : kNames) {
        if (static_cast<std::uint16_t>(c) == raw) {
            return c;
        }
    }
    return std::nullopt;
}

Error::Error(ErrorCode code, std::string detail)
    : std::runtime_error(std::string(to_string(code)) + (detail.empty() ? "" : ": " + detail)),
      code_(code), detail_(std::move(detail)) {}

}// namespace elastikit
