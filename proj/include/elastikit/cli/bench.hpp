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

#ifndef ELASTIKIT_CLI_BENCH_HPP
#define ELASTIKIT_CLI_BENCH_HPP

#include <elastikit/cli/demo.hpp>

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace elastikit::cli {

/// One measured execution. Baseline rows are the no-middleware thread pool.
struct BenchRow {
    std::size_t host_count = 0;
    std::int64_t run = 0;
    bool baseline = false;
    double makespan_ms = 0;
};

struct BenchSummary {
    std::size_t host_count = 0;
    double median_ms = 0;
    std::optional<double> baseline_median_ms;
    /// median minus baseline median
    std::optional<double> overhead_ms;
};

/// CSV layout, header `host_count,run,makespan_ms`:
///
///   2,0,812.402          measured run 0 on 2 hosts
///   2,baseline-0,640.118 baseline run 0 with 2 threads
///   2,median,812.402     summary rows follow all run rows
///   2,baseline-median,640.118
///   2,overhead-median,172.284
///   all,overhead-slope,41.5   least-squares ms per host
struct BenchReport {
    std::vector<BenchRow> rows;

    [[nodiscard]] std::vector<BenchSummary> summaries() const;
    /// Least-squares slope of overhead over host count; nullopt with fewer
    /// than two host counts that have both kinds of rows.
    [[nodiscard]] std::optional<double> overhead_slope() const;
    /// Next run index for a host count: one past the largest present.
    [[nodiscard]] std::int64_t next_run(std::size_t host_count) const;

    void write_csv(std::ostream& out) const;
    /// Reads run rows and ignores summary rows. Throws InvalidConfig.
    static BenchReport read_csv(std::istream& in);
};

double median(std::vector<double> xs);

struct BenchOptions {
    std::vector<std::size_t> host_counts{1, 2, 4};
    std::size_t runs = 5;
    std::vector<TestSuiteSpec> suites = uniform_suites(8, 4, 33);
    manager::ManagerConfig base;// backend, hostd path, ...
    bool baseline = true;
};

/// For each run and host count: one middleware execution on a fresh
/// manager, then one baseline execution. The host-count order rotates from
/// run to run. Rows are appended to `report` and
/// `on_row` sees each as it lands, so partial results survive a failure.
void run_bench(const BenchOptions& options, BenchReport& report,
               const std::function<void(const BenchRow&)>& on_row = nullptr);

}// namespace elastikit::cli

#endif// ELASTIKIT_CLI_BENCH_HPP
