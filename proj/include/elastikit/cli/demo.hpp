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

#ifndef ELASTIKIT_CLI_DEMO_HPP
#define ELASTIKIT_CLI_DEMO_HPP

#include <elastikit/manager/manager.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace elastikit::cli {

/// One client test suite: `tasks` independent items, each computing fib(n).
struct TestSuiteSpec {
    std::string suite_id;
    std::int64_t tasks = 1;
    std::uint32_t n = 1;

    /// Throws InvalidConfig unless tasks >= 1 and n in [1, 40].
    void validate() const;
};

/// Line-delimited JSON records {"suite_id": ..., "tasks": ..., "n": ...}.
/// Blank lines are skipped. Throws InvalidConfig with the line number.
std::vector<TestSuiteSpec> parse_suites(std::istream& in);
std::vector<TestSuiteSpec> load_suites(const std::string& path);

/// `count` identical suites named s0, s1, ...
std::vector<TestSuiteSpec> uniform_suites(std::size_t count, std::int64_t tasks, std::uint32_t n);

struct TaskResult {
    std::int64_t task = 0;
    std::int64_t value = 0;
    std::int64_t duration_ms = 0;
    std::size_t worker = 0;
};

struct SuiteResult {
    TestSuiteSpec spec;
    bool ok = true;
    std::string error;
    std::vector<TaskResult> results;// ordered by task index
    std::vector<std::int64_t> worker_tasks;
    double total_ms = 0;

    /// {"duration_ms":..., "error"?, "ok":..., "results":[...], ...} on one line.
    [[nodiscard]] std::string to_json() const;
};

struct DemoReport {
    std::size_t workers = 0;
    std::vector<SuiteResult> suites;
    /// From the first suite dispatch to the last result; excludes provisioning.
    double makespan_ms = 0;

    [[nodiscard]] bool ok() const;
};

/// The testing service: one TestMaster, one TestWorker per host, suites run
/// one after another with each suite's tasks split evenly over the workers.
///
/// `manager` should place `workers + 1` deploys with the master sharing
/// the first host (round robin over `workers` hosts does this). Result
/// records are written to `out` as suites finish when it is non-null.
/// Infrastructure failures throw; task failures are reported per suite.
class TestingService {
  public:
    TestingService(manager::CloudManager& manager, std::size_t workers);

    DemoReport run(const std::vector<TestSuiteSpec>& suites, std::ostream* out = nullptr);
    /// Destroys the workers and the master.
    void close();
    [[nodiscard]] const manager::CloudObjectHandle& master() const { return master_; }
    [[nodiscard]] const std::vector<manager::CloudObjectHandle>& workers() const { return workers_; }

  private:
    SuiteResult run_suite(const TestSuiteSpec& spec);

    manager::CloudManager& manager_;
    manager::CloudObjectHandle master_;
    std::vector<manager::CloudObjectHandle> workers_;
};

/// The same suites without middleware: a thread pool of `workers` threads
/// with the same task split. Used as the overhead baseline.
DemoReport run_baseline(const std::vector<TestSuiteSpec>& suites, std::size_t workers);

/// Config for a demo run on `hosts` workers: round robin over them, quota
/// raised to fit.
manager::ManagerConfig demo_config(manager::ManagerConfig base, std::size_t hosts);

}// namespace elastikit::cli

#endif// ELASTIKIT_CLI_DEMO_HPP
