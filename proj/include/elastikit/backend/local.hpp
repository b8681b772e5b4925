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

#ifndef ELASTIKIT_BACKEND_LOCAL_HPP
#define ELASTIKIT_BACKEND_LOCAL_HPP

#include <elastikit/backend/backend.hpp>

#include <sys/types.h>

#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace elastikit::backend {

struct LocalOptions {
    std::string hostd_path;
    wire::Endpoint callback;
    std::size_t max_hosts = 4;
    std::int64_t billing_time_unit_ms = kLocalBillingUnitMs;
    std::chrono::milliseconds start_timeout{10'000};
    std::chrono::milliseconds stop_timeout{5'000};
};

/// Hosts are elastikit-hostd processes on this machine.
///
/// Each worker is told the manager's callback endpoint and announces itself
/// there; provision() returns once its HostOnline reached the bus. Workers
/// die with the process that spawned them.
class LocalBackend final : public CloudBackend {
  public:
    /// The clock measures provision times and billing boundaries; it must be
    /// a wall clock.
    LocalBackend(const Clock& clock, events::EventBus& bus, LocalOptions options);
    ~LocalBackend() override;

    [[nodiscard]] std::string name() const override { return "local"; }
    CloudHostRecord provision(const std::string& size) override;
    void terminate(const CloudHostId& id) override;
    [[nodiscard]] std::vector<CloudHostRecord> list() const override;
    [[nodiscard]] std::optional<CloudHostRecord> find(const CloudHostId& id) const override;
    [[nodiscard]] std::int64_t billing_time_unit_ms() const override { return options_.billing_time_unit_ms; }
    void set_billing_handler(BillingHandler handler) override;
    void shutdown() override;

    /// SIGKILLs a worker without telling anyone. Fault-injection hook.
    void kill(const CloudHostId& id);
    [[nodiscard]] std::optional<pid_t> pid_of(const CloudHostId& id) const;

  private:
    struct Host {
        CloudHostRecord record;
        pid_t pid = -1;
        std::int64_t next_boundary = 0;
    };
    struct SpawnRequest {
        std::vector<std::string> argv;
        std::promise<pid_t> result;
    };

    pid_t spawn(std::vector<std::string> argv);
    void spawner_loop();
    void billing_loop();
    bool wait_lifecycle(const CloudHostId& id, std::string_view type, std::chrono::milliseconds timeout);
    void stop_process(pid_t pid);
    void emit(std::string_view type, const CloudHostId& id);

    const Clock& clock_;
    events::EventBus& bus_;
    LocalOptions options_;
    IdGenerator ids_;

    mutable std::mutex mu_;
    std::condition_variable cv_;
    std::map<CloudHostId, Host> hosts_;
    std::size_t pending_ = 0;// provisions in flight, counted against the quota
    BillingHandler billing_;
    bool stopping_ = false;

    std::mutex seen_mu_;
    std::condition_variable seen_cv_;
    std::set<std::pair<std::string, CloudHostId>> seen_;
    std::uint64_t subscription_ = 0;

    std::mutex spawn_mu_;
    std::condition_variable spawn_cv_;
    std::deque<SpawnRequest*> spawn_queue_;
    bool spawner_stop_ = false;

    std::thread spawner_;
    std::thread billing_thread_;
};

}// namespace elastikit::backend

#endif// ELASTIKIT_BACKEND_LOCAL_HPP
