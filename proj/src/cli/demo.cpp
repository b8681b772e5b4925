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

#include <elastikit/cli/demo.hpp>
#include <elastikit/core/error.hpp>
#include <elastikit/hostd/builtin.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <istream>
#include <ostream>
#include <thread>

namespace elastikit::cli {

using nlohmann::json;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

/// Task t goes to worker t mod w, matching TestMaster::plan.
std::vector<std::vector<std::int64_t>> split(std::int64_t tasks, std::size_t workers) {
    std::vector<std::vector<std::int64_t>> shares(workers);
    for (std::int64_t t = 0; t < tasks; ++t) shares[static_cast<std::size_t>(t) % workers].push_back(t);
    return shares;
}

}// namespace

void TestSuiteSpec::validate() const {
    if (tasks < 1) throw Error(ErrorCode::InvalidConfig, "suite " + suite_id + ": tasks must be at least 1");
    if (n < 1 || n > 40) throw Error(ErrorCode::InvalidConfig, "suite " + suite_id + ": n must be in [1, 40]");
}

std::vector<TestSuiteSpec> parse_suites(std::istream& in) {
    std::vector<TestSuiteSpec> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        auto where = "suites line " + std::to_string(line_no) + ": ";
        TestSuiteSpec s;
        try {
            auto j = json::parse(line);
            s.suite_id = j.at("suite_id").get<std::string>();
            s.tasks = j.at("tasks").get<std::int64_t>();
            auto n = j.at("n").get<std::int64_t>();
            if (n < 1 || n > 40) throw Error(ErrorCode::InvalidConfig, "n must be in [1, 40]");
            s.n = static_cast<std::uint32_t>(n);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidConfig, where + e.what());
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidConfig, where + e.detail());
        }
        try {
            s.validate();
        } catch (const Error& e) {
            throw Error(ErrorCode::InvalidConfig, where + e.detail());
        }
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<TestSuiteSpec> load_suites(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read " + path);
    return parse_suites(in);
}

std::vector<TestSuiteSpec> uniform_suites(std::size_t count, std::int64_t tasks, std::uint32_t n) {
    std::vector<TestSuiteSpec> out;
    for (std::size_t i = 0; i < count; ++i) {
        TestSuiteSpec s{"s" + std::to_string(i), tasks, n};
        s.validate();
        out.push_back(std::move(s));
    }
    return out;
}

std::string SuiteResult::to_json() const {
    json results_j = json::array();
    for (auto const& r : results) {
        results_j.push_back({{"duration_ms", r.duration_ms}, {"task", r.task}, {"value", r.value}, {"worker", r.worker}});
    }
    json j = {{"n", spec.n},
              {"ok", ok},
              {"results", results_j},
              {"suite_id", spec.suite_id},
              {"tasks", spec.tasks},
              {"total_ms", total_ms},
              {"worker_tasks", worker_tasks}};
    if (!ok) j["error"] = error;
    return j.dump();
}

bool DemoReport::ok() const {
    return std::all_of(suites.begin(), suites.end(), [](auto const& s) { return s.ok; });
}

manager::ManagerConfig demo_config(manager::ManagerConfig base, std::size_t hosts) {
    if (hosts < 1) throw Error(ErrorCode::InvalidConfig, "need at least one host");
    base.policy = "roundrobin:" + std::to_string(hosts);
    base.max_hosts = std::max(base.max_hosts, hosts);
    return base;
}

TestingService::TestingService(manager::CloudManager& manager, std::size_t workers)
    : manager_(manager), master_(manager.deploy_object("TestMaster")) {
    if (workers < 1) throw Error(ErrorCode::InvalidConfig, "need at least one worker");
    for (std::size_t i = 0; i < workers; ++i) {
        workers_.push_back(manager_.deploy_object("TestWorker"));
        master_.invoke("add_worker", {workers_.back().ref()});
    }
}

SuiteResult TestingService::run_suite(const TestSuiteSpec& spec) {
    SuiteResult r;
    r.spec = spec;
    auto t0 = std::chrono::steady_clock::now();
    auto digest = manager_.publish_artifact(builtin::make_suite_script(spec.n));
    auto plan = master_.invoke("plan", {Value::int64(spec.tasks)}).as_list();

    std::vector<std::future<Value>> pending;
    for (std::size_t w = 0; w < plan.size(); ++w) {
        r.worker_tasks.push_back(static_cast<std::int64_t>(plan[w].as_list().size()));
        if (plan[w].as_list().empty()) {
            pending.emplace_back();
            continue;
        }
        pending.push_back(std::async(std::launch::async, [worker = workers_[w], share = plan[w], hex = digest.hex()] {
            return worker.invoke("run", {Value::text(hex), share});
        }));
    }
    for (std::size_t w = 0; w < pending.size(); ++w) {
        if (!pending[w].valid()) continue;
        try {
            auto reply = pending[w].get();
            for (auto const& item : reply.as_list()) {
                auto const& m = item.as_map();
                r.results.push_back({m.at("task").as_int64(), m.at("value").as_int64(), m.at("duration_ms").as_int64(), w});
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ApplicationError) throw;
            r.ok = false;
            r.error = e.detail();
        }
    }
    std::sort(r.results.begin(), r.results.end(), [](auto const& a, auto const& b) { return a.task < b.task; });
    r.total_ms = ms_since(t0);
    master_.invoke("record", {Value::text(spec.suite_id), Value::int64(spec.tasks),
                              Value::int64(static_cast<std::int64_t>(r.total_ms))});
    return r;
}

DemoReport TestingService::run(const std::vector<TestSuiteSpec>& suites, std::ostream* out) {
    DemoReport report;
    report.workers = workers_.size();
    auto t0 = std::chrono::steady_clock::now();
    for (auto const& s : suites) {
        report.suites.push_back(run_suite(s));
        if (out != nullptr) *out << report.suites.back().to_json() << '\n' << std::flush;
    }
    report.makespan_ms = ms_since(t0);
    return report;
}

void TestingService::close() {
    for (auto const& w : workers_) w.destroy();
    workers_.clear();
    master_.destroy();
}

DemoReport run_baseline(const std::vector<TestSuiteSpec>& suites, std::size_t workers) {
    if (workers < 1) throw Error(ErrorCode::InvalidConfig, "need at least one worker");
    DemoReport report;
    report.workers = workers;
    auto t0 = std::chrono::steady_clock::now();
    for (auto const& spec : suites) {
        SuiteResult r;
        r.spec = spec;
        auto s0 = std::chrono::steady_clock::now();
        auto shares = split(spec.tasks, workers);
        std::vector<std::vector<TaskResult>> per_worker(workers);
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            r.worker_tasks.push_back(static_cast<std::int64_t>(shares[w].size()));
            pool.emplace_back([&, w] {
                for (auto t : shares[w]) {
                    auto start = std::chrono::steady_clock::now();
                    auto v = static_cast<std::int64_t>(builtin::fib(spec.n));
                    per_worker[w].push_back({t, v, static_cast<std::int64_t>(ms_since(start)), w});
                }
            });
        }
        for (auto& t : pool) t.join();
        for (auto& v : per_worker) r.results.insert(r.results.end(), v.begin(), v.end());
        std::sort(r.results.begin(), r.results.end(), [](auto const& a, auto const& b) { return a.task < b.task; });
        r.total_ms = ms_since(s0);
        report.suites.push_back(std::move(r));
    }
    report.makespan_ms = ms_since(t0);
    return report;
}

}// namespace elastikit::cli
