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

// Acceptance suite: one PASS/FAIL line per criterion. Arguments select
// criteria by number; no arguments runs all of them.

#include "acceptance/twin.hpp"
#include "support/generators.hpp"
#include "support/metric_oracle.hpp"

#include <elastikit/artifacts/artifacts.hpp>
#include <elastikit/cli/bench.hpp>
#include <elastikit/cli/trace.hpp>
#include <elastikit/events/event_log.hpp>
#include <elastikit/wire/frame.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <new>
#include <set>
#include <sstream>

using namespace elastikit;
using acceptance::Op;
using acceptance::Twin;

// ---------------------------------------------------------------------------
// Allocation probe: largest single request while armed, on the arming thread.

namespace {
thread_local bool g_probe_armed = false;
std::atomic<std::size_t> g_largest_alloc{0};

void note_alloc(std::size_t n) {
    if (!g_probe_armed) return;
    auto cur = g_largest_alloc.load();
    while (n > cur && !g_largest_alloc.compare_exchange_weak(cur, n)) {
    }
}
}// namespace

void* operator new(std::size_t n) {
    note_alloc(n);
    if (void* p = std::malloc(n == 0 ? 1 : n)) return p;
    throw std::bad_alloc();
}
void* operator new[](std::size_t n) { return operator new(n); }
void operator delete(void* p) noexcept { std::free(p); }
void operator delete[](void* p) noexcept { std::free(p); }
void operator delete(void* p, std::size_t) noexcept { std::free(p); }
void operator delete[](void* p, std::size_t) noexcept { std::free(p); }

namespace {

// Tolerances and sizes.
constexpr int kTransparencyPrograms = 200;
constexpr int kMetricRounds = 500;
constexpr std::size_t kScenarioQuota = 4;
constexpr std::int64_t kScenarioBtu = 60'000;
constexpr int kMigratedObjects = 50;
constexpr double kMakespanTolerance = 0.10;
constexpr std::size_t kOverheadRuns = 9;// more than the CLI default to damp shared-machine noise
constexpr int kFramedMessages = 10'000;
constexpr std::size_t kFuzzStreamBytes = 1u << 20;
constexpr int kFuzzStreams = 8;
constexpr int kArtifactSequences = 100;

struct Outcome {
    bool pass = true;
    std::string detail;
};

Outcome fail(std::string why) { return {false, std::move(why)}; }

std::string hexdump_short(const Bytes& b) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < b.size() && i < 48; ++i) {
        out += digits[b[i] >> 4];
        out += digits[b[i] & 15];
    }
    return out;
}

manager::ManagerConfig local_config(std::size_t hosts) {
    manager::ManagerConfig c;
    c.backend = "local";
    c.policy = "roundrobin:" + std::to_string(hosts);
    c.max_hosts = hosts + 1;
    return c;
}

// ---------------------------------------------------------------------------
// 1. Transparency

Outcome transparency() {
    testkit::Gen g(0x7a11);
    std::vector<std::unique_ptr<manager::CloudManager>> managers;
    for (std::size_t hosts = 1; hosts <= 3; ++hosts) {
        managers.push_back(std::make_unique<manager::CloudManager>(local_config(hosts), builtin::builtin_registry()));
    }
    std::size_t steps = 0;
    for (int p = 0; p < kTransparencyPrograms; ++p) {
        auto& mgr = *managers[static_cast<std::size_t>(p) % managers.size()];
        std::vector<Twin> local;
        std::vector<manager::CloudObjectHandle> remote;
        List local_out, remote_out;
        auto length = g.int_in(5, 30);
        for (int s = 0; s < length; ++s) {
            if (local.empty() || (local.size() < 4 && g.chance(0.15))) {
                auto cls = acceptance::fixture_classes()[g.index(4)];
                local.emplace_back(cls);
                remote.push_back(mgr.deploy_object(cls));
                local_out.push_back(acceptance::ok_outcome(Value::text(cls)));
                remote_out.push_back(acceptance::ok_outcome(Value::text(remote.back().class_name())));
                continue;
            }
            auto i = g.index(local.size());
            auto op = acceptance::random_op(g, local[i].class_name());
            local_out.push_back(local[i].apply(op));
            remote_out.push_back(acceptance::apply_remote(remote[i], op));
            ++steps;
        }
        auto a = encode_value(Value::list(local_out));
        auto b = encode_value(Value::list(remote_out));
        if (a != b) {
            for (std::size_t k = 0; k < local_out.size(); ++k) {
                if (!(local_out[k] == remote_out[k])) {
                    return fail("program " + std::to_string(p) + " step " + std::to_string(k) + ": local " +
                                to_debug_string(local_out[k]) + " vs cloud " + to_debug_string(remote_out[k]));
                }
            }
            return fail("program " + std::to_string(p) + ": encodings differ");
        }
        for (auto const& h : remote) h.destroy();
    }
    for (auto& m : managers) m->shutdown();
    return {true, std::to_string(kTransparencyPrograms) + " programs, " + std::to_string(steps) +
                      " operations, bytewise identical over 1-3 local hosts"};
}

// ---------------------------------------------------------------------------
// 2. Metric engine against brute force

struct WriteLog {
    std::vector<testkit::OracleWrite> writes;
};

Outcome check_metric(const events::MonitoringMetric& m, std::int64_t t0, const std::vector<MonitoringEvent>& log,
                     std::int64_t end) {
    events::MetricEngine engine;
    engine.register_metric(m, t0);
    WriteLog rec;
    engine.set_listener([&](const std::string& name, const Value& v, std::int64_t at) {
        if (name == m.name) rec.writes.push_back({v, at});
    });
    for (auto const& e : log) engine.on_event(e);
    engine.advance_to(end);
    auto expected = testkit::MetricOracle(m, t0).run(log, end);
    auto text = m.statement.to_string();
    if (rec.writes.size() != expected.size()) {
        return fail(text + ": " + std::to_string(rec.writes.size()) + " writes, oracle " + std::to_string(expected.size()));
    }
    for (std::size_t i = 0; i < expected.size(); ++i) {
        if (rec.writes[i].at != expected[i].at || !testkit::metric_values_match(rec.writes[i].value, expected[i].value)) {
            return fail(text + ": write " + std::to_string(i) + " got " + to_debug_string(rec.writes[i].value) + "@" +
                        std::to_string(rec.writes[i].at) + " want " + to_debug_string(expected[i].value) + "@" +
                        std::to_string(expected[i].at));
        }
    }
    return {};
}

Outcome metric_engine() {
    testkit::Gen g(0x3e7a);
    const char* aggs[] = {"avg", "sum", "count", "min", "max"};
    const char* cmps[] = {"==", "!=", "<", "<=", ">", ">="};
    const char* props[] = {"duration", "v"};
    for (int round = 0; round < kMetricRounds; ++round) {
        std::string agg = aggs[g.index(5)];
        auto type = agg == "avg"     ? events::MetricType::Float64
                    : agg == "count" ? events::MetricType::Int64
                                     : (g.chance(0.5) ? events::MetricType::Int64 : events::MetricType::Float64);
        std::string prop = props[g.index(2)];
        auto text = "SELECT " + agg + "(" + prop + ") FROM ExecutionFinished WINDOW " +
                    (g.chance(0.5) ? "time_batch" : "sliding") + "(" + std::to_string(g.int_in(1, 500)) + ")";
        if (g.chance(0.4)) {
            text += std::string(" WHERE k ") + cmps[g.index(6)] + " " +
                    (g.chance(0.7) ? std::to_string(g.int_in(0, 4)) : std::to_string(g.real(0, 4)));
        }
        events::MonitoringMetric m{"m", type, events::MetricStatement::parse(text)};
        auto t0 = g.int_in(0, 100);
        std::vector<MonitoringEvent> log;
        auto ts = t0 + g.int_in(-20, 20);
        for (auto n = g.int_in(0, 200); n > 0; --n) {
            ts += g.int_in(0, 60);
            Map p;
            for (auto const* name : props) {
                if (!g.chance(0.85)) continue;
                p[name] = g.chance(0.6) ? Value::int64(g.int_in(-10'000, 10'000)) : Value::float64(g.real(-500, 500));
            }
            if (g.chance(0.8)) p["k"] = g.chance(0.7) ? Value::int64(g.int_in(0, 4)) : Value::float64(g.real(0, 4));
            log.push_back({g.chance(0.85) ? "ExecutionFinished" : "ExecutionStarted", ts, EventSource::manager(), p});
        }
        if (auto r = check_metric(m, t0, log, ts + g.int_in(0, 1000)); !r.pass) return r;
    }

    // The canonical shape: average execution time over 10 s batches.
    events::MonitoringMetric avg_duration{"avg_duration", events::MetricType::Float64,
                                          events::MetricStatement::parse(
                                              "SELECT avg(duration) FROM ExecutionFinished WINDOW time_batch(10000)")};
    std::vector<MonitoringEvent> log;
    for (std::int64_t t = 0; t < 60'000; t += 700) {
        log.push_back({"ExecutionFinished", t, EventSource::manager(), {{"duration", Value::int64(t % 1300)}}});
    }
    if (auto r = check_metric(avg_duration, 0, log, 60'000); !r.pass) return r;
    return {true, std::to_string(kMetricRounds) + " random logs and statements plus avg(duration)/10 s; float rel tol 1e-9"};
}

// ---------------------------------------------------------------------------
// 3. Elasticity scenario

struct ScenarioResult {
    std::vector<MonitoringEvent> events;
    std::int64_t removal_at = 0;
    std::size_t peak_hosts = 0;
    std::size_t final_hosts = 0;
};

ScenarioResult run_scenario() {
    manager::ManagerConfig c;
    c.backend = "simulated";
    c.policy = "threshold:0.8,0.2," + std::to_string(kScenarioQuota);
    c.max_hosts = kScenarioQuota;
    c.billing_time_unit_ms = kScenarioBtu;
    manager::CloudManager mgr(c, builtin::builtin_registry());
    events::EventRecorder rec(mgr.bus());
    ScenarioResult out;
    auto w = c.utilization_window_ms;

    // Spike: every window each host is 95% busy, and a new object arrives.
    std::vector<manager::CloudObjectHandle> loads{mgr.deploy_object("Load")};
    for (int step = 0; step < 7; ++step) {
        std::map<std::string, std::int64_t> busy;
        for (auto const& l : loads) {
            auto host = mgr.describe(l.id())->resident_on->hex();
            auto grant = std::min<std::int64_t>(w * 95 / 100 - busy[host], w * 95 / 100);
            if (grant > 0) l.invoke("busy", {Value::int64(grant)});
            busy[host] += grant;
        }
        mgr.advance_clock(w);
        loads.push_back(mgr.deploy_object("Load"));
        out.peak_hosts = std::max(out.peak_hosts, mgr.pool_view().size());
    }

    // Removal: everything but the first object goes away.
    out.removal_at = mgr.clock().now_ms();
    for (std::size_t i = 1; i < loads.size(); ++i) loads[i].destroy();
    for (int i = 0; i < 40; ++i) mgr.advance_clock(7'000);
    out.final_hosts = mgr.pool_view().size();
    mgr.bus().flush();
    out.events = rec.events();// application teardown is not part of the scenario
    return out;
}

Outcome elasticity() {
    auto a = run_scenario();
    auto b = run_scenario();

    // Through the log format, as the trace tool would read it.
    std::stringstream log;
    for (auto const& e : a.events) log << events::to_json_line(e) << '\n';
    auto events = events::read_log(log);

    std::size_t provisions = 0;
    std::set<std::string> terminated;
    std::map<std::string, std::vector<MonitoringEvent>> per_host;
    for (auto const& e : events) {
        auto const* h = e.property("host_id");
        if (h != nullptr) per_host[h->as_text()].push_back(e);
        if (e.type == event_type::HostProvisionRequested) ++provisions;
        if (e.type == event_type::HostTerminated) {
            if (e.timestamp < a.removal_at) return fail("host terminated during the spike");
            terminated.insert(e.property("host_id")->as_text());
        }
    }
    if (provisions != kScenarioQuota || a.peak_hosts != kScenarioQuota) {
        return fail("provisioned " + std::to_string(provisions) + ", peak " + std::to_string(a.peak_hosts));
    }
    if (terminated.size() != kScenarioQuota - 1 || a.final_hosts != 1) {
        return fail(std::to_string(terminated.size()) + " idle hosts terminated, " + std::to_string(a.final_hosts) +
                    " left");
    }
    for (auto const& [host, es] : per_host) {
        if (auto bad = cli::check_order(es, {"HostProvisionRequested", "HostOnline"})) return fail(host + ": " + *bad);
    }
    if (auto bad = cli::check_billing_alignment(events, kScenarioBtu)) return fail(*bad);
    if (auto bad = cli::check_residency(events)) return fail(*bad);

    auto shape = [](const ScenarioResult& r) {
        std::vector<std::pair<std::string, std::int64_t>> s;
        for (auto const& e : r.events) s.emplace_back(e.type, e.timestamp);
        return s;
    };
    if (shape(a) != shape(b)) return fail("two runs produced different traces");
    return {true, "4 hosts at peak, 3 released on boundaries, trace checks pass, " + std::to_string(events.size()) +
                      " events identical across runs"};
}

// ---------------------------------------------------------------------------
// 4. Migration

Outcome migration() {
    testkit::Gen g(0x316);
    manager::CloudManager mgr(local_config(3), builtin::builtin_registry());
    const std::vector<std::string> classes{"Counter", "Register", "Accumulator"};
    std::vector<Twin> twins;
    std::vector<manager::CloudObjectHandle> objs;
    std::vector<std::set<std::string>> keys(kMigratedObjects);
    auto step = [&](std::size_t i) -> Outcome {
        auto op = acceptance::random_op(g, twins[i].class_name());
        if (op.name == "put") keys[i].insert(op.args[0].as_text());
        auto local = twins[i].apply(op);
        auto remote = acceptance::apply_remote(objs[i], op);
        if (!(local == remote)) return fail("object " + std::to_string(i) + " " + op.name + ": " + to_debug_string(local) +
                                            " vs " + to_debug_string(remote));
        return {};
    };
    auto observe = [&](std::size_t i) {
        List out;
        for (auto const& op : acceptance::observations(twins[i].class_name(), {keys[i].begin(), keys[i].end()})) {
            out.push_back(acceptance::apply_remote(objs[i], op));
        }
        return encode_value(Value::list(std::move(out)));
    };
    auto observe_twin = [&](std::size_t i) {
        List out;
        for (auto const& op : acceptance::observations(twins[i].class_name(), {keys[i].begin(), keys[i].end()})) {
            out.push_back(twins[i].apply(op));
        }
        return encode_value(Value::list(std::move(out)));
    };

    for (int i = 0; i < kMigratedObjects; ++i) {
        auto cls = classes[g.index(classes.size())];
        twins.emplace_back(cls);
        objs.push_back(mgr.deploy_object(cls));
    }
    std::size_t moves = 0;
    for (int round = 0; round < 3; ++round) {
        for (int k = 0; k < kMigratedObjects * 4; ++k) {
            if (auto r = step(g.index(twins.size())); !r.pass) return r;
        }
        for (std::size_t i = 0; i < objs.size(); ++i) {
            if (!g.chance(0.6)) continue;
            auto before = observe(i);
            auto pool = mgr.pool_view();
            auto here = *mgr.describe(objs[i].id())->resident_on;
            std::vector<CloudHostId> others;
            for (auto const& h : pool.hosts) {
                if (h.id != here) others.push_back(h.id);
            }
            mgr.migrate(objs[i].id(), others[g.index(others.size())]);
            ++moves;
            auto after = observe(i);
            if (before != after) return fail("object " + std::to_string(i) + " changed across migration: " +
                                             hexdump_short(before) + " vs " + hexdump_short(after));
            if (after != observe_twin(i)) return fail("object " + std::to_string(i) + " diverged from its twin");
        }
    }

    // A failed move: the destination dies first; the source keeps serving.
    auto pool = mgr.pool_view();
    auto victim = pool.hosts.back().id;
    std::size_t probe = 0;
    while (*mgr.describe(objs[probe].id())->resident_on == victim) ++probe;
    auto before = observe(probe);
    mgr.local_backend()->kill(victim);
    try {
        mgr.migrate(objs[probe].id(), victim);
        return fail("migration to a killed host succeeded");
    } catch (const Error& e) {
        if (e.code() != ErrorCode::DestUnreachable) return fail("expected DestUnreachable, got " + std::string(e.what()));
    }
    if (observe(probe) != before || before != observe_twin(probe)) return fail("source changed after failed migration");
    for (int k = 0; k < 20; ++k) {
        if (auto r = step(probe); !r.pass) return r;
    }
    mgr.shutdown();
    return {true, std::to_string(kMigratedObjects) + " objects, " + std::to_string(moves) +
                      " migrations, observationally equal; failed move left the source serving"};
}

// ---------------------------------------------------------------------------
// 5. Overhead experiment

Outcome overhead() {
    cli::BenchOptions opts;// desk-scale workload: 8 suites, hosts 1,2,4
    opts.runs = kOverheadRuns;
    opts.base.backend = "local";
    cli::BenchReport report;
    cli::run_bench(opts, report);
    auto path = std::filesystem::current_path() / "acceptance_bench.csv";
    {
        std::ofstream out(path, std::ios::trunc);
        report.write_csv(out);
    }
    auto s = report.summaries();
    if (s.size() != opts.host_counts.size()) return fail("missing summaries");
    // Interference only adds time, so the fastest run per host count is the
    // comparison statistic; medians are reported alongside.
    std::map<std::size_t, double> best;
    for (auto const& r : report.rows) {
        if (r.baseline) continue;
        auto [it, fresh] = best.emplace(r.host_count, r.makespan_ms);
        if (!fresh) it->second = std::min(it->second, r.makespan_ms);
    }
    std::ostringstream detail;
    detail.precision(1);
    detail << std::fixed << "best";
    for (auto const& [h, ms] : best) detail << ' ' << h << "h=" << ms << "ms";
    detail << ", medians";
    for (auto const& x : s) detail << ' ' << x.host_count << "h=" << x.median_ms << "ms";
    if (auto slope = report.overhead_slope()) detail << ", overhead slope " << *slope << " ms/host";
    detail << ", csv " << path.string();
    for (std::size_t i = 1; i < s.size(); ++i) {
        auto prev = best.at(s[i - 1].host_count);
        auto cur = best.at(s[i].host_count);
        if (cur > prev * (1 + kMakespanTolerance)) {
            return fail("makespan grew from " + std::to_string(s[i - 1].host_count) + " to " +
                        std::to_string(s[i].host_count) + " hosts beyond tolerance; " + detail.str());
        }
    }
    return {true, detail.str()};
}

// ---------------------------------------------------------------------------
// 6. Protocol robustness

Outcome protocol() {
    testkit::Gen g(0xf4a3);
    for (int i = 0; i < kFramedMessages; ++i) {
        auto m = g.message();
        auto rid = g.bits();
        auto bytes = wire::encode_frame(m, rid);
        auto [frame, used] = wire::decode_frame(bytes);
        if (used != bytes.size() || frame.request_id != rid || !(frame.message == m)) {
            return fail("message " + std::to_string(i) + " did not round-trip");
        }
    }

    std::size_t frames = 0, errors = 0;
    g_largest_alloc = 0;
    g_probe_armed = true;
    for (int s = 0; s < kFuzzStreams; ++s) {
        Bytes stream;
        stream.reserve(kFuzzStreamBytes);
        if (s % 2 == 0) {
            while (stream.size() < kFuzzStreamBytes) stream.push_back(static_cast<std::uint8_t>(g.bits()));
        } else {
            // Valid frames with sparse bit flips and occasional huge lengths.
            while (stream.size() < kFuzzStreamBytes) {
                auto f = wire::encode_frame(g.message(), g.bits());
                for (auto& byte : f) {
                    if (g.chance(0.002)) byte ^= static_cast<std::uint8_t>(1u << g.int_in(0, 7));
                }
                if (g.chance(0.02)) f[0] = 0xff;
                stream.insert(stream.end(), f.begin(), f.end());
            }
        }
        std::size_t pos = 0;
        while (pos < stream.size()) {
            wire::FrameDecoder dec;
            try {
                while (pos < stream.size()) {
                    auto n = std::min<std::size_t>(static_cast<std::size_t>(g.int_in(1, 4096)), stream.size() - pos);
                    dec.feed(std::span<const std::uint8_t>(stream.data() + pos, n));
                    pos += n;
                    while (dec.next()) ++frames;
                }
                dec.finish();
            } catch (const Error&) {
                ++errors;// resynchronise on a fresh decoder
            }
        }
    }
    g_probe_armed = false;
    auto largest = g_largest_alloc.load();
    auto cap = wire::kMaxFramePayload;
    if (largest > cap) return fail("an allocation of " + std::to_string(largest) + " bytes exceeded the cap");
    return {true, std::to_string(kFramedMessages) + " frames round-trip; " + std::to_string(kFuzzStreams) +
                      " x 1 MiB fuzz streams, " + std::to_string(frames) + " frames and " + std::to_string(errors) +
                      " rejections, largest allocation " + std::to_string(largest) + " bytes"};
}

// ---------------------------------------------------------------------------
// 7. Artifact cache

class FlippingOrigin final : public artifacts::ArtifactOrigin {
  public:
    FlippingOrigin(const artifacts::ArtifactStore& store, std::size_t bit) : inner_(store), bit_(bit) {}
    Bytes fetch(const artifacts::Digest& d) override {
        auto b = inner_.fetch(d);
        b[(bit_ / 8) % b.size()] ^= static_cast<std::uint8_t>(1u << (bit_ % 8));
        return b;
    }

  private:
    artifacts::StoreOrigin inner_;
    std::size_t bit_;
};

Outcome artifact_cache() {
    struct Vector {
        std::string input, hex;
    };
    const Vector vectors[] = {
        {"", "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"},
        {"abc", "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"},
        {"abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq",
         "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1"},
    };
    for (auto const& v : vectors) {
        if (artifacts::Digest::of(v.input).hex() != v.hex) return fail("SHA-256 of '" + v.input + "'");
    }

    testkit::Gen g(0xa47);
    manager::ManagerConfig c;
    c.policy = "roundrobin:3";
    manager::CloudManager mgr(c, builtin::builtin_registry());
    std::vector<manager::CloudObjectHandle> loads;
    for (int i = 0; i < 3; ++i) loads.push_back(mgr.deploy_object("Load"));
    std::set<std::pair<std::string, std::string>> pulled;// (host, digest)
    std::size_t fetches = 0;
    for (int s = 0; s < kArtifactSequences; ++s) {
        auto payload = g.bytes(static_cast<std::size_t>(g.int_in(0, 4096)));
        auto d = mgr.publish_artifact(payload);
        for (auto n = g.int_in(1, 6); n > 0; --n) {
            auto const& l = loads[g.index(loads.size())];
            auto got = l.invoke("fetch", {Value::text(d.hex())});
            if (got.as_bytes() != payload) return fail("payload mismatch in sequence " + std::to_string(s));
            pulled.emplace(mgr.describe(l.id())->resident_on->hex(), d.hex());
            ++fetches;
        }
        if (mgr.callback_server().artifact_fetches() != pulled.size()) {
            return fail("sequence " + std::to_string(s) + ": " + std::to_string(mgr.callback_server().artifact_fetches()) +
                        " fetch frames for " + std::to_string(pulled.size()) + " distinct (host, digest) pairs");
        }
    }
    mgr.shutdown();

    artifacts::ArtifactStore store;
    for (int t = 0; t < kArtifactSequences; ++t) {
        auto payload = g.bytes(static_cast<std::size_t>(g.int_in(1, 2048)));
        auto d = store.publish(payload);
        auto keep = store.publish(g.bytes(64));
        FlippingOrigin bad(store, static_cast<std::size_t>(g.int_in(0, static_cast<std::int64_t>(payload.size()) * 8 - 1)));
        artifacts::ArtifactCache cache(bad);
        artifacts::StoreOrigin good_origin(store);
        artifacts::ArtifactCache warm(good_origin);
        (void)warm.fetch(keep);
        auto entries = cache.entries();
        auto bytes = cache.bytes_cached();
        try {
            (void)cache.fetch(d);
            return fail("corrupted payload accepted");
        } catch (const Error& e) {
            if (e.code() != ErrorCode::VerificationFailed) return fail(std::string("expected VerificationFailed: ") + e.what());
        }
        if (cache.entries() != entries || cache.bytes_cached() != bytes || cache.contains(d)) {
            return fail("cache changed after a rejected payload");
        }
    }
    return {true, "SHA-256 vectors match; " + std::to_string(fetches) + " fetches over " +
                      std::to_string(kArtifactSequences) + " sequences used " + std::to_string(pulled.size()) +
                      " fetch frames; " + std::to_string(kArtifactSequences) + " one-bit corruptions rejected"};
}

}// namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"transparency", transparency}, {"metric-engine", metric_engine}, {"elasticity", elasticity},
        {"migration", migration},       {"overhead", overhead},           {"protocol", protocol},
        {"artifact-cache", artifact_cache}};
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int n = static_cast<int>(i) + 1;
        if (!selected.empty() && !selected.contains(n)) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome r;
        try {
            r = criteria[i].second();
        } catch (const std::exception& e) {
            r = fail(std::string("exception: ") + e.what());
        }
        auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream line;
        line.precision(1);
        line << std::fixed << (r.pass ? "PASS" : "FAIL") << ' ' << n << ' ' << criteria[i].first << " (" << secs
             << " s): " << r.detail;
        std::cout << line.str() << std::endl;
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}
