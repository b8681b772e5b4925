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

#ifndef ELASTIKIT_MANAGER_CONFIG_HPP
#define ELASTIKIT_MANAGER_CONFIG_HPP

#include <elastikit/wire/socket.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace elastikit::manager {

inline constexpr std::string_view kConfigEnvVar = "ELASTIKIT_CONFIG";

/// Flat key = value configuration. Blank lines and lines starting with '#'
/// are ignored; unknown keys are errors.
struct ManagerConfig {
    std::string backend = "simulated";// local | simulated
    /// 0 picks the backend default (60 s simulated, 30 s local).
    std::int64_t billing_time_unit_ms = 0;
    std::size_t max_hosts = 4;
    std::string policy = "single";
    wire::Endpoint listen_callback{"127.0.0.1", 0};

    std::int64_t utilization_window_ms = 10'000;
    std::int64_t policy_deadline_ms = 1'000;
    std::int64_t startup_delay_ms = 2'000;// simulated backend only
    std::string hostd_path;               // local backend; empty means auto-detect

    /// Throws InvalidConfig.
    static ManagerConfig parse(std::string_view text);
    static ManagerConfig load(const std::string& path);
    /// Loads the file named by ELASTIKIT_CONFIG, or returns defaults.
    static ManagerConfig from_env();

    [[nodiscard]] bool simulated() const { return backend == "simulated"; }
    [[nodiscard]] std::string to_string() const;
};

/// The worker binary: an explicit path, else ELASTIKIT_HOSTD, else next to
/// the running executable, else the build-tree location.
std::string resolve_hostd_path(const std::string& configured);

}// namespace elastikit::manager

#endif// ELASTIKIT_MANAGER_CONFIG_HPP
