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

// elastikit: testing-service demo, makespan benchmark and event-trace tool.

#include <elastikit/cli/bench.hpp>
#include <elastikit/cli/demo.hpp>
#include <elastikit/cli/trace.hpp>
#include <elastikit/core/error.hpp>
#include <elastikit/events/event_log.hpp>
#include <elastikit/hostd/builtin.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace elastikit;

int cmd_demo(const std::string& config_path, const std::string& suites_path, std::size_t hosts,
             const std::string& log_path) {
    auto config = config_path.empty() ? manager::ManagerConfig::from_env() : manager::ManagerConfig::load(config_path);
    auto suites = cli::load_suites(suites_path);
    if (hosts == 0) hosts = config.max_hosts;
    manager::CloudManager mgr(cli::demo_config(config, hosts), builtin::builtin_registry());
    std::ofstream log_file;
    std::unique_ptr<events::EventLogWriter> log;
    if (!log_path.empty()) {
        log_file.open(log_path, std::ios::trunc);
        if (!log_file) throw Error(ErrorCode::InvalidConfig, "cannot write " + log_path);
        log = std::make_unique<events::EventLogWriter>(mgr.bus(), log_file);
    }
    cli::TestingService service(mgr, hosts);
    auto report = service.run(suites, &std::cout);
    std::cerr << "demo: " << report.suites.size() << " suites on " << report.workers << " hosts in "
              << report.makespan_ms << " ms" << std::endl;
    service.close();
    mgr.shutdown();
    log.reset();
    return report.ok() ? 0 : 1;
}

int cmd_bench(const std::vector<std::size_t>& hosts, std::size_t runs, const std::string& out_path,
              const std::string& suites_path, const std::string& config_path, bool baseline) {
    cli::BenchOptions opts;
    opts.host_counts = hosts;
    opts.runs = runs;
    opts.baseline = baseline;
    if (!suites_path.empty()) opts.suites = cli::load_suites(suites_path);
    opts.base = config_path.empty() ? manager::ManagerConfig{} : manager::ManagerConfig::load(config_path);
    opts.base.backend = "local";

    cli::BenchReport report;
    if (std::filesystem::exists(out_path)) {
        std::ifstream in(out_path);
        report = cli::BenchReport::read_csv(in);
    }
    auto save = [&] {
        auto tmp = out_path + ".tmp";
        {
            std::ofstream out(tmp, std::ios::trunc);
            report.write_csv(out);
        }
        std::filesystem::rename(tmp, out_path);
    };
    try {
        cli::run_bench(opts, report, [&](const cli::BenchRow& r) {
            std::cerr << "bench: hosts=" << r.host_count << (r.baseline ? " baseline" : "") << " run=" << r.run
                      << " makespan_ms=" << r.makespan_ms << std::endl;
            save();
        });
    } catch (...) {
        save();
        throw;
    }
    save();
    if (auto slope = report.overhead_slope()) std::cerr << "bench: overhead slope " << *slope << " ms/host" << std::endl;
    return 0;
}

int cmd_trace(const std::string& log_path, const std::vector<std::string>& types, const std::string& host,
              const std::vector<std::string>& order, std::int64_t billing_unit, bool residency) {
    std::vector<MonitoringEvent> events;
    if (log_path == "-") {
        events = events::read_log(std::cin);
    } else {
        std::ifstream in(log_path);
        if (!in) throw Error(ErrorCode::MalformedLog, "cannot read " + log_path);
        events = events::read_log(in);
    }
    cli::TraceFilter filter;
    filter.types.insert(types.begin(), types.end());
    if (!host.empty()) filter.host = host;
    for (auto const& e : cli::filter_trace(events, filter)) std::cout << cli::format_event(e) << '\n';

    int status = 0;
    auto report = [&](const char* what, const std::optional<std::string>& failure) {
        if (!failure) return;
        std::cerr << "trace: " << what << ": " << *failure << std::endl;
        status = 1;
    };
    if (!order.empty()) report("order", cli::check_order(events, order));
    if (billing_unit > 0) report("billing", cli::check_billing_alignment(events, billing_unit));
    if (residency) report("residency", cli::check_residency(events));
    return status;
}

}// namespace

int main(int argc, char** argv) {
    CLI::App app{"elastikit: elastic cloud objects"};
    app.require_subcommand(1);

    auto* demo = app.add_subcommand("demo", "run the testing service over cloud hosts");
    std::string config_path, suites_path, log_path;
    std::size_t demo_hosts = 0;
    demo->add_option("--config", config_path, "manager config file (default: $ELASTIKIT_CONFIG)");
    demo->add_option("--suites", suites_path, "line-delimited suite records")->required();
    demo->add_option("--hosts", demo_hosts, "worker hosts (default: max_hosts)");
    demo->add_option("--log", log_path, "write the event log here");

    auto* bench = app.add_subcommand("bench", "makespan over host counts on the local backend");
    std::vector<std::size_t> bench_hosts{1, 2, 4};
    std::size_t runs = 5;
    std::string out_path = "report.csv", bench_suites, bench_config;
    bool no_baseline = false;
    bench->add_option("--hosts", bench_hosts, "host counts")->delimiter(',')->capture_default_str();
    bench->add_option("--runs", runs, "runs per host count")->capture_default_str();
    bench->add_option("--out", out_path, "CSV report; existing rows are kept")->capture_default_str();
    bench->add_option("--suites", bench_suites, "suite file (default: 8 suites of 4 x fib(33))");
    bench->add_option("--config", bench_config, "manager config file");
    bench->add_flag("--no-baseline", no_baseline, "skip the in-process baseline");

    auto* trace = app.add_subcommand("trace", "print and check an event log");
    std::string trace_log, trace_host;
    std::vector<std::string> trace_types, order;
    std::int64_t billing_unit = 0;
    bool residency = false;
    trace->add_option("log", trace_log, "event log, or - for stdin")->required();
    trace->add_option("--type", trace_types, "keep only these event types")->delimiter(',');
    trace->add_option("--host", trace_host, "keep only events about this host id");
    trace->add_option("--assert-order", order, "fail unless these types occur in this order")->delimiter(',');
    trace->add_option("--assert-billing", billing_unit, "fail unless terminations fall on billing boundaries (ms)");
    trace->add_flag("--assert-residency", residency, "fail if a host is terminated with resident objects");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*demo) return cmd_demo(config_path, suites_path, demo_hosts, log_path);
        if (*bench) return cmd_bench(bench_hosts, runs, out_path, bench_suites, bench_config, !no_baseline);
        if (*trace) return cmd_trace(trace_log, trace_types, trace_host, order, billing_unit, residency);
    } catch (const elastikit::Error& e) {
        std::cerr << "elastikit: " << e.what() << std::endl;
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "elastikit: " << e.what() << std::endl;
        return 2;
    }
    return 0;
}
