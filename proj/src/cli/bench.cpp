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

#include <elastikit/cli/bench.hpp>
#include <elastikit/core/error.hpp>
#include <elastikit/hostd/builtin.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace elastikit::cli {

namespace {

constexpr std::string_view kHeader = "host_count,run,makespan_ms";
constexpr std::string_view kBaselinePrefix = "baseline-";

std::string fmt_ms(double ms) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

template <typename T>
std::optional<T> number(std::string_view s) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) return std::nullopt;
    return v;
}

}// namespace

double median(std::vector<double> xs) {
    if (xs.empty()) return 0;
    std::sort(xs.begin(), xs.end());
    auto n = xs.size();
    return n % 2 == 1 ? xs[n / 2] : (xs[n / 2 - 1] + xs[n / 2]) / 2;
}

std::vector<BenchSummary> BenchReport::summaries() const {
    std::map<std::size_t, std::pair<std::vector<double>, std::vector<double>>> by_host;
    for (auto const& r : rows) {
        auto& slot = by_host[r.host_count];
        (r.baseline ? slot.second : slot.first).push_back(r.makespan_ms);
    }
    std::vector<BenchSummary> out;
    for (auto const& [h, xs] : by_host) {
        if (xs.first.empty()) continue;
        BenchSummary s{h, median(xs.first), std::nullopt, std::nullopt};
        if (!xs.second.empty()) {
            s.baseline_median_ms = median(xs.second);
            s.overhead_ms = s.median_ms - *s.baseline_median_ms;
        }
        out.push_back(s);
    }
    return out;
}

std::optional<double> BenchReport::overhead_slope() const {
    std::vector<std::pair<double, double>> pts;
    for (auto const& s : summaries()) {
        if (s.overhead_ms) pts.emplace_back(static_cast<double>(s.host_count), *s.overhead_ms);
    }
    if (pts.size() < 2) return std::nullopt;
    double mx = 0, my = 0;
    for (auto [x, y] : pts) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double sxy = 0, sxx = 0;
    for (auto [x, y] : pts) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    return sxx == 0 ? std::nullopt : std::optional<double>(sxy / sxx);
}

std::int64_t BenchReport::next_run(std::size_t host_count) const {
    std::int64_t next = 0;
    for (auto const& r : rows) {
        if (r.host_count == host_count) next = std::max(next, r.run + 1);
    }
    return next;
}

void BenchReport::write_csv(std::ostream& out) const {
    out << kHeader << '\n';
    for (auto const& r : rows) {
        out << r.host_count << ',' << (r.baseline ? std::string(kBaselinePrefix) : std::string()) << r.run << ','
            << fmt_ms(r.makespan_ms) << '\n';
    }
    for (auto const& s : summaries()) {
        out << s.host_count << ",median," << fmt_ms(s.median_ms) << '\n';
        if (s.baseline_median_ms) {
            out << s.host_count << ",baseline-median," << fmt_ms(*s.baseline_median_ms) << '\n';
            out << s.host_count << ",overhead-median," << fmt_ms(*s.overhead_ms) << '\n';
        }
    }
    if (auto slope = overhead_slope()) out << "all,overhead-slope," << fmt_ms(*slope) << '\n';
}

BenchReport BenchReport::read_csv(std::istream& in) {
    BenchReport report;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto bad = [&] { return Error(ErrorCode::InvalidConfig, "bench csv line " + std::to_string(line_no)); };
        if (line_no == 1) {
            if (line != kHeader) throw bad();
            continue;
        }
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
        if (cols.size() != 3) throw bad();
        auto host = number<std::size_t>(cols[0]);
        if (!host) {
            if (cols[0] == "all") continue;
            throw bad();
        }
        BenchRow r;
        r.host_count = *host;
        std::string_view run = cols[1];
        if (run.starts_with(kBaselinePrefix)) {
            run.remove_prefix(kBaselinePrefix.size());
            r.baseline = true;
        }
        auto idx = number<std::int64_t>(run);
        if (!idx) continue;// summary row
        auto ms = number<double>(cols[2]);
        if (!ms) throw bad();
        r.run = *idx;
        r.makespan_ms = *ms;
        report.rows.push_back(r);
    }
    return report;
}

void run_bench(const BenchOptions& options, BenchReport& report, const std::function<void(const BenchRow&)>& on_row) {
    auto add = [&](BenchRow r) {
        report.rows.push_back(r);
        if (on_row) on_row(r);
    };
    for (std::size_t i = 0; i < options.runs; ++i) {
        // Rotate the order each run so slow drift does not favour one host count.
        auto order = options.host_counts;
        if (!order.empty()) std::rotate(order.begin(), order.begin() + static_cast<long>(i % order.size()), order.end());
        for (auto hosts : order) {
            auto run = report.next_run(hosts);
            {
                manager::CloudManager mgr(demo_config(options.base, hosts), builtin::builtin_registry());
                TestingService service(mgr, hosts);
                auto rep = service.run(options.suites);
                if (!rep.ok()) throw Error(ErrorCode::ApplicationError, "a bench task failed");
                service.close();
                mgr.shutdown();
                add({hosts, run, false, rep.makespan_ms});
            }
            if (options.baseline) add({hosts, run, true, run_baseline(options.suites, hosts).makespan_ms});
        }
    }
}

}// namespace elastikit::cli
