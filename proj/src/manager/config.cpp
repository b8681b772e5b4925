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
#include <elastikit/manager/config.hpp>

#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

namespace elastikit::manager {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())) != 0) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())) != 0) s.remove_suffix(1);
    return s;
}

template <typename T>
T parse_number(std::string_view key, std::string_view v, T min) {
    T n{};
    auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc{} || p != v.data() + v.size() || n < min) {
        throw Error(ErrorCode::InvalidConfig, std::string(key) + ": bad value '" + std::string(v) + "'");
    }
    return n;
}

}// namespace

ManagerConfig ManagerConfig::parse(std::string_view text) {
    ManagerConfig c;
    std::size_t line_no = 0;
    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        auto line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        auto value = trim(line.substr(eq + 1));
        if (key == "backend") {
            if (value != "local" && value != "simulated") {
                throw Error(ErrorCode::InvalidConfig, "backend must be local or simulated");
            }
            c.backend = value;
        } else if (key == "billing_time_unit_ms") {
            c.billing_time_unit_ms = parse_number<std::int64_t>(key, value, 1);
        } else if (key == "max_hosts") {
            c.max_hosts = parse_number<std::size_t>(key, value, 1);
        } else if (key == "policy") {
            if (value.empty()) throw Error(ErrorCode::InvalidConfig, "policy must not be empty");
            c.policy = value;
        } else if (key == "listen_callback") {
            c.listen_callback = wire::Endpoint::parse(value);
        } else if (key == "utilization_window_ms") {
            c.utilization_window_ms = parse_number<std::int64_t>(key, value, 1);
        } else if (key == "policy_deadline_ms") {
            c.policy_deadline_ms = parse_number<std::int64_t>(key, value, 1);
        } else if (key == "startup_delay_ms") {
            c.startup_delay_ms = parse_number<std::int64_t>(key, value, 0);
        } else if (key == "hostd_path") {
            c.hostd_path = value;
        } else {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": unknown key '" +
                                                      std::string(key) + "'");
        }
    }
    return c;
}

ManagerConfig ManagerConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

ManagerConfig ManagerConfig::from_env() {
    auto const* path = std::getenv(std::string(kConfigEnvVar).c_str());
    if (path == nullptr || *path == '\0') return {};
    return load(path);
}

std::string ManagerConfig::to_string() const {
    std::ostringstream os;
    os << "backend = " << backend << "\n"
       << "billing_time_unit_ms = " << billing_time_unit_ms << "\n"
       << "max_hosts = " << max_hosts << "\n"
       << "policy = " << policy << "\n"
       << "listen_callback = " << listen_callback.to_string() << "\n"
       << "utilization_window_ms = " << utilization_window_ms << "\n"
       << "policy_deadline_ms = " << policy_deadline_ms << "\n"
       << "startup_delay_ms = " << startup_delay_ms << "\n";
    if (!hostd_path.empty()) os << "hostd_path = " << hostd_path << "\n";
    return os.str();
}

std::string resolve_hostd_path(const std::string& configured) {
    namespace fs = std::filesystem;
    if (!configured.empty()) return configured;
    if (auto const* env = std::getenv("ELASTIKIT_HOSTD"); env != nullptr && *env != '\0') return env;
    std::error_code ec;
    auto self = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        auto candidate = self.parent_path() / "elastikit-hostd";
        if (::access(candidate.c_str(), X_OK) == 0) return candidate.string();
    }
#ifdef ELASTIKIT_HOSTD_PATH
    return ELASTIKIT_HOSTD_PATH;
#else
    return "elastikit-hostd";
#endif
}

}// namespace elastikit::manager
