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

#include "manager/manager_fixture.hpp"
#include "support/generators.hpp"

#include <elastikit/hostd/class_registry.hpp>

#include <map>
#include <set>
#include <thread>

using namespace elastikit;
using namespace elastikit::testkit;
using manager::CloudObjectHandle;
using policy::BillingDecision;
using policy::ScalingDecision;

namespace {

std::size_t residents_on(manager::CloudManager& m, const CloudHostId& h) {
    for (auto const& v : m.pool_view().hosts) {
        if (v.id == h) return v.residents;
    }
    return 0;
}

}// namespace

TEST(Manager, SingleHostProvisionsExactlyOnce) {
    ManagerHarness h(sim_config("single"));
    auto a = h.mgr->deploy_object("Counter");
    auto b = h.mgr->deploy_object("Counter");
    auto pool = h.mgr->pool_view();
    ASSERT_EQ(pool.size(), 1u);
    EXPECT_EQ(pool.hosts[0].residents, 2u);
    EXPECT_EQ(h.mgr->describe(a.id())->resident_on, pool.hosts[0].id);
    EXPECT_EQ(h.mgr->describe(b.id())->state, ObjectState::Deployed);
    EXPECT_EQ(h.count("HostProvisionRequested"), 1u);
    EXPECT_EQ(h.count("ObjectScheduledEvent"), 2u);
    EXPECT_EQ(h.count("ObjectDeployedEvent"), 2u);
}

TEST(Manager, RoundRobinSpreadsThreeObjectsTwoToOne) {
    ManagerHarness h(sim_config("roundrobin:2"));
    for (int i = 0; i < 3; ++i) h.mgr->deploy_object("Counter");
    auto pool = h.mgr->pool_view();
    ASSERT_EQ(pool.size(), 2u);
    std::vector<std::size_t> counts{pool.hosts[0].residents, pool.hosts[1].residents};
    std::sort(counts.rbegin(), counts.rend());
    EXPECT_EQ(counts, (std::vector<std::size_t>{2, 1}));
}

TEST(Manager, PolicyNamingTerminatedHostIsPolicyError) {
    auto p = std::make_shared<ScriptedPolicy>();
    ManagerHarness h(sim_config("single"), builtin::builtin_registry(), p);
    h.mgr->deploy_object("Counter");
    auto host = h.mgr->pool_view().hosts[0].id;
    p->billing = [](auto&, auto&) { return BillingDecision::Destroy; };
    auto c = h.mgr->deploy_object("Counter");
    c.destroy();
    h.mgr->handle(h.mgr->objects()[0].id).destroy();
    h.mgr->advance_clock(backend::kSimulatedBillingUnitMs);
    ASSERT_TRUE(h.mgr->pool_view().empty());

    p->schedule = [host](auto&) { return ScalingDecision{policy::UseExisting{host}, {}}; };
    auto before = h.mgr->objects().size();
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Counter"); }), ErrorCode::PolicyError);
    EXPECT_EQ(h.mgr->objects().size(), before);
    EXPECT_TRUE(h.mgr->pool_view().empty());
    EXPECT_EQ(h.count("HostProvisionRequested"), 2u);
}

TEST(Manager, PolicyTimeoutAndPanicFailTheDeploy) {
    auto p = std::make_shared<ScriptedPolicy>();
    auto cfg = sim_config("single");
    cfg.policy_deadline_ms = 50;
    ManagerHarness h(cfg, builtin::builtin_registry(), p);
    p->schedule = [](auto&) -> ScalingDecision { throw std::runtime_error("planner bug"); };
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Counter"); }), ErrorCode::PolicyError);
    p->schedule = [](auto&) {
        std::this_thread::sleep_for(std::chrono::milliseconds(200));
        return ScalingDecision{};
    };
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Counter"); }), ErrorCode::PolicyError);
    std::this_thread::sleep_for(std::chrono::milliseconds(250));
    p->schedule = nullptr;
    EXPECT_NO_THROW(h.mgr->deploy_object("Counter"));// the loop survives
}

TEST(Manager, UnknownClassAndArity) {
    ManagerHarness h(sim_config("single"));
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Nope"); }), ErrorCode::UnknownClass);
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Counter", {Value::int64(1)}); }), ErrorCode::ArityMismatch);
    EXPECT_TRUE(h.mgr->pool_view().empty());
}

TEST(Manager, DeployFailureRollsBackFreshHost) {
    hostd::ClassRegistry reg;
    builtin::register_builtin_classes(reg);
    struct Fragile {};
    hostd::ClassBuilder<Fragile>("Fragile")
        .constructor({PassingMode::ByValue},
                     [](hostd::InvocationContext&, const List& a) {
                         if (a[0].as_int64() < 0) throw std::runtime_error("negative");
                         return std::make_unique<Fragile>();
                     })
        .register_in(reg);
    ManagerHarness h(sim_config("roundrobin:2"), reg);
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Fragile", {Value::int64(-1)}); }), ErrorCode::DeployFailed);
    EXPECT_TRUE(h.mgr->pool_view().empty());
    EXPECT_EQ(h.count("HostTerminatedEvent"), 1u);
    EXPECT_TRUE(h.mgr->objects().empty());
    EXPECT_NO_THROW(h.mgr->deploy_object("Fragile", {Value::int64(1)}));
}

TEST(Manager, ProvisionFailedAtQuota) {
    auto p = std::make_shared<ScriptedPolicy>();// always provisions
    ManagerHarness h(sim_config("single", 1), builtin::builtin_registry(), p);
    h.mgr->deploy_object("Counter");
    EXPECT_EQ(code_of([&] { h.mgr->deploy_object("Counter"); }), ErrorCode::ProvisionFailed);
}

TEST(Manager, CounterThroughHandles) {
    ManagerHarness h(sim_config("single"));
    auto c = h.mgr->deploy_object("Counter");
    c.invoke("add", {Value::int64(2)});
    c.invoke("add", {Value::int64(3)});
    EXPECT_EQ(c.invoke("get"), Value::int64(5));
    c.set("step", Value::int64(10));
    EXPECT_EQ(c.invoke("tick"), Value::int64(15));
    EXPECT_EQ(c.get("value"), Value::int64(15));
    EXPECT_EQ(code_of([&] { c.invoke("nope"); }), ErrorCode::UnknownMethod);
    EXPECT_EQ(code_of([&] { (void)h.mgr->handle(CloudObjectId::from_parts(1, 2)); }), ErrorCode::UnknownCO);
}

TEST(Manager, DestroySemantics) {
    ManagerHarness h(sim_config("threshold:0.8,0.2"));
    auto c = h.mgr->deploy_object("Counter");
    auto host = *h.mgr->describe(c.id())->resident_on;
    c.destroy();
    EXPECT_EQ(code_of([&] { c.invoke("get"); }), ErrorCode::ObjectDestroyed);
    EXPECT_EQ(code_of([&] { c.destroy(); }), ErrorCode::ObjectDestroyed);
    EXPECT_EQ(h.count("ObjectDestroyedEvent"), 1u);
    EXPECT_EQ(h.mgr->describe(c.id())->state, ObjectState::Destroyed);
    EXPECT_FALSE(h.mgr->describe(c.id())->resident_on);

    // Released at the next boundary, not eagerly.
    EXPECT_EQ(h.mgr->pool_view().size(), 1u);
    EXPECT_EQ(h.count("HostTerminatedEvent"), 0u);
    h.mgr->advance_clock(backend::kSimulatedBillingUnitMs - h.mgr->clock().now_ms() - 1);
    EXPECT_EQ(h.count("HostTerminatedEvent"), 0u);
    h.mgr->advance_clock(1);
    EXPECT_EQ(h.count("HostTerminatedEvent"), 1u);
    EXPECT_TRUE(h.mgr->pool_view().empty());
    auto evs = h.events();
    auto it = std::find_if(evs.begin(), evs.end(), [](auto& e) { return e.type == "HostTerminatedEvent"; });
    EXPECT_EQ(it->timestamp, backend::kSimulatedBillingUnitMs);
    EXPECT_EQ(it->property("host_id")->as_text(), host.hex());
}

TEST(Manager, BillingGuardAndKeep) {
    auto p = std::make_shared<ScriptedPolicy>();
    ManagerHarness h(sim_config("single"), builtin::builtin_registry(), p);
    p->schedule = [](auto& pool) {
        return pool.empty() ? ScalingDecision{} : ScalingDecision{policy::UseExisting{pool.hosts[0].id}, {}};
    };
    auto c = h.mgr->deploy_object("Counter");
    p->billing = [](auto&, auto&) { return BillingDecision::Keep; };
    h.mgr->advance_clock(backend::kSimulatedBillingUnitMs);
    EXPECT_EQ(h.mgr->pool_view().size(), 1u);
    EXPECT_EQ(h.count("PolicyDecisionRejected"), 0u);

    p->billing = [](auto&, auto&) { return BillingDecision::Destroy; };
    h.mgr->advance_clock(backend::kSimulatedBillingUnitMs);
    EXPECT_EQ(h.mgr->pool_view().size(), 1u);
    EXPECT_EQ(h.count("PolicyDecisionRejected"), 1u);
    EXPECT_EQ(c.invoke("get"), Value::int64(0));
    EXPECT_EQ(h.count("HostTerminatedEvent"), 0u);
}

TEST(Manager, BillingTimeoutMeansKeep) {
    auto p = std::make_shared<ScriptedPolicy>();
    auto cfg = sim_config("single");
    cfg.policy_deadline_ms = 30;
    ManagerHarness h(cfg, builtin::builtin_registry(), p);
    h.mgr->deploy_object("Counter").destroy();
    p->billing = [](auto&, auto&) {
        std::this_thread::sleep_for(std::chrono::milliseconds(100));
        return BillingDecision::Destroy;
    };
    h.mgr->advance_clock(backend::kSimulatedBillingUnitMs);
    EXPECT_EQ(h.mgr->pool_view().size(), 1u);
    std::this_thread::sleep_for(std::chrono::milliseconds(150));
}

TEST(Manager, MigrationPreservesState) {
    ManagerHarness h(sim_config("roundrobin:2"));
    auto c = h.mgr->deploy_object("Counter");
    auto other = h.mgr->deploy_object("Counter");
    auto src = *h.mgr->describe(c.id())->resident_on;
    auto dst = *h.mgr->describe(other.id())->resident_on;
    ASSERT_NE(src, dst);
    c.invoke("add", {Value::int64(3)});
    h.mgr->migrate(c.id(), dst);
    EXPECT_EQ(h.mgr->describe(c.id())->resident_on, dst);
    EXPECT_EQ(c.invoke("get"), Value::int64(3));
    EXPECT_EQ(residents_on(*h.mgr, src), 0u);
    EXPECT_EQ(residents_on(*h.mgr, dst), 2u);
    auto evs = h.events();
    auto it = std::find_if(evs.begin(), evs.end(), [](auto& e) { return e.type == "ObjectMigratedEvent"; });
    ASSERT_NE(it, evs.end());
    EXPECT_EQ(it->property("source")->as_text(), src.hex());
    EXPECT_EQ(it->property("dest")->as_text(), dst.hex());
    EXPECT_NE(it->property("duration"), nullptr);
    EXPECT_EQ(h.count("ObjectDeployedEvent"), 2u);// restore is not a deploy
}

TEST(Manager, MigrationErrors) {
    ManagerHarness h(sim_config("roundrobin:2"));
    auto f = h.mgr->deploy_object("Faulty");
    auto c = h.mgr->deploy_object("Counter");
    auto f_host = *h.mgr->describe(f.id())->resident_on;
    auto c_host = *h.mgr->describe(c.id())->resident_on;
    EXPECT_EQ(code_of([&] { h.mgr->migrate(f.id(), c_host); }), ErrorCode::SnapshotUnsupported);
    EXPECT_EQ(h.mgr->describe(f.id())->resident_on, f_host);
    EXPECT_EQ(h.mgr->describe(f.id())->state, ObjectState::Deployed);
    EXPECT_EQ(code_of([&] { h.mgr->migrate(c.id(), CloudHostId::from_parts(5, 5)); }), ErrorCode::DestUnreachable);
    c.destroy();
    EXPECT_EQ(code_of([&] { h.mgr->migrate(c.id(), f_host); }), ErrorCode::ObjectDestroyed);
}

TEST(Manager, MigrationToDeadHostLeavesSourceServing) {
    ManagerHarness h(sim_config("roundrobin:2"));
    auto c = h.mgr->deploy_object("Counter");
    auto other = h.mgr->deploy_object("Counter");
    auto dst = *h.mgr->describe(other.id())->resident_on;
    c.invoke("add", {Value::int64(7)});
    h.mgr->simulated_backend()->kill(dst);
    EXPECT_EQ(code_of([&] { h.mgr->migrate(c.id(), dst); }), ErrorCode::DestUnreachable);
    EXPECT_EQ(c.invoke("get"), Value::int64(7));
    EXPECT_EQ(h.mgr->describe(c.id())->state, ObjectState::Deployed);
}

TEST(Manager, MigrateThenReleaseSource) {
    auto p = std::make_shared<ScriptedPolicy>();
    ManagerHarness h(sim_config("single"), builtin::builtin_registry(), p);
    auto x = h.mgr->deploy_object("Counter");
    auto y = h.mgr->deploy_object("Counter");
    auto from = *h.mgr->describe(x.id())->resident_on;
    auto to = *h.mgr->describe(y.id())->resident_on;
    x.invoke("add", {Value::int64(9)});
    h.mgr->migrate(x.id(), to);
    p->billing = [](auto&, auto&) { return BillingDecision::Destroy; };
    h.mgr->advance_clock(backend::kSimulatedBillingUnitMs);
    auto pool = h.mgr->pool_view();
    ASSERT_EQ(pool.size(), 1u);
    EXPECT_EQ(pool.hosts[0].id, to);
    EXPECT_FALSE(pool.find(from));
    EXPECT_EQ(h.count("PolicyDecisionRejected"), 1u);// the destination still hosts both
    EXPECT_EQ(x.invoke("get"), Value::int64(9));
    EXPECT_EQ(y.invoke("get"), Value::int64(0));
}

TEST(Manager, CallsDuringMigrationWaitAndRouteToDest) {
    ManagerHarness h(sim_config("roundrobin:2"));
    auto c = h.mgr->deploy_object("Load");
    auto other = h.mgr->deploy_object("Load");
    auto dst = *h.mgr->describe(other.id())->resident_on;
    c.set("total_ms", Value::int64(41));
    std::atomic<bool> stop{false};
    std::vector<Value> seen;
    std::mutex mu;
    std::thread caller([&] {
        while (!stop) {
            auto v = c.get("total_ms");
            std::lock_guard lock(mu);
            seen.push_back(v);
        }
    });
    bool moved = false;
    for (int attempt = 0; attempt < 200 && !moved; ++attempt) {
        try {
            h.mgr->migrate(c.id(), dst);
            moved = true;
        } catch (const Error& e) {
            ASSERT_EQ(e.code(), ErrorCode::NotQuiescent);
            std::this_thread::yield();
        }
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    stop = true;
    caller.join();
    ASSERT_TRUE(moved);
    for (auto const& v : seen) EXPECT_EQ(v, Value::int64(41));
    EXPECT_EQ(h.mgr->describe(c.id())->resident_on, dst);
}

TEST(Manager, Globals) {
    ManagerHarness h(sim_config("roundrobin:2"));
    EXPECT_EQ(h.mgr->global_get("x"), Value::null());
    auto a = h.mgr->deploy_object("GlobalCounter");
    auto b = h.mgr->deploy_object("GlobalCounter");
    ASSERT_NE(h.mgr->describe(a.id())->resident_on, h.mgr->describe(b.id())->resident_on);
    a.invoke("write", {Value::text("x"), Value::int64(1)});
    EXPECT_EQ(b.invoke("read", {Value::text("x")}), Value::int64(1));
    h.mgr->global_set("x", Value::text("app"));
    EXPECT_EQ(a.invoke("read", {Value::text("x")}), Value::text("app"));

    std::vector<std::thread> ts;
    for (int t = 0; t < 4; ++t) {
        ts.emplace_back([&, t] {
            auto const& obj = t % 2 == 0 ? a : b;
            for (int i = 0; i < 25; ++i) obj.invoke("increment", {Value::text("n")});
        });
    }
    for (auto& t : ts) t.join();
    auto n = h.mgr->global_get("n").as_int64();
    EXPECT_GE(n, 1);
    EXPECT_LE(n, 100);
}

TEST(Manager, RefsResolveToHandles) {
    ManagerHarness h(sim_config("roundrobin:2"));
    auto master = h.mgr->deploy_object("TestMaster");
    auto worker = h.mgr->deploy_object("TestWorker");
    master.invoke("add_worker", {worker.ref()});
    auto ref = master.invoke("worker", {Value::int64(0)});
    auto w = h.mgr->handle(ref.as_ref());
    EXPECT_EQ(w.class_name(), "TestWorker");
    EXPECT_EQ(w.get("completed"), Value::int64(0));
}

TEST(Manager, CustomEventsAndArtifacts) {
    ManagerHarness h(sim_config("single"));
    auto l = h.mgr->deploy_object("Load");
    l.invoke("emit", {Value::text("custom.ping"), Value::map({{"n", Value::int64(1)}})});
    EXPECT_EQ(h.count("custom.ping"), 1u);
    EXPECT_EQ(code_of([&] { l.invoke("emit", {Value::text("HostOnline"), Value::map({})}); }),
              ErrorCode::ApplicationError);

    auto d = h.mgr->publish_artifact(std::string_view("payload"));
    for (int i = 0; i < 3; ++i) {
        auto got = l.invoke("fetch", {Value::text(d.hex())}).as_bytes();
        EXPECT_EQ(std::string(got.begin(), got.end()), "payload");
    }
    EXPECT_EQ(h.mgr->callback_server().artifact_fetches(), 1u);
    EXPECT_EQ(code_of([&] { l.invoke("fetch", {Value::text(std::string(64, '0'))}); }), ErrorCode::ApplicationError);
}

TEST(Manager, UtilizationMetric) {
    auto cfg = sim_config("single");
    cfg.utilization_window_ms = 10'000;
    ManagerHarness h(cfg);
    auto l = h.mgr->deploy_object("Load");
    l.invoke("busy", {Value::int64(3'000)});
    l.invoke("busy", {Value::int64(2'000)});
    h.mgr->advance_clock(10'000);
    auto busy = h.mgr->metrics().query(std::string(manager::kBusyMetric));
    ASSERT_TRUE(busy);
    EXPECT_EQ(busy->value, Value::int64(5'000));
    auto u = h.mgr->metrics().query(std::string(policy::kUtilizationMetric));
    ASSERT_TRUE(u);
    EXPECT_DOUBLE_EQ(u->value.as_float64(), 0.5);
}

// Random scheduling scenarios never break single residency or release a
// host that still has residents.
TEST(ManagerProperty, ResidencyAndReleaseSafety) {
    testkit::Gen g(8080);
    for (int round = 0; round < 8; ++round) {
        ManagerHarness h(sim_config(round % 2 == 0 ? "roundrobin:3" : "threshold:0.8,0.2", 4));
        std::vector<CloudObjectHandle> live;
        for (int step = 0; step < 40; ++step) {
            auto op = g.int_in(0, 9);
            if (op < 4 || live.empty()) {
                live.push_back(h.mgr->deploy_object(g.chance(0.5) ? "Counter" : "Load"));
            } else if (op < 6) {
                auto& c = live[g.index(live.size())];
                if (c.class_name() == "Counter") c.invoke("add", {Value::int64(1)});
                else c.invoke("busy", {Value::int64(g.int_in(0, 9'000))});
            } else if (op < 7) {
                auto i = g.index(live.size());
                live[i].destroy();
                live.erase(live.begin() + static_cast<long>(i));
            } else if (op < 8) {
                auto pool = h.mgr->pool_view();
                if (!pool.empty()) {
                    auto& c = live[g.index(live.size())];
                    try {
                        h.mgr->migrate(c.id(), pool.hosts[g.index(pool.size())].id);
                    } catch (const Error& e) {
                        FAIL() << to_string(e.code()) << " " << e.detail();
                    }
                }
            } else {
                h.mgr->advance_clock(g.int_in(1'000, 90'000));
            }
        }
        // Replay the trace.
        std::map<std::string, std::string> where;// co -> host
        std::map<std::string, int> residents;    // host -> count
        for (auto const& e : h.events()) {
            auto text = [&](const char* k) { return e.property(k)->as_text(); };
            if (e.type == "ObjectDeployedEvent") {
                ASSERT_FALSE(where.contains(text("co_id"))) << "second deploy of " << text("co_id");
                where[text("co_id")] = text("host_id");
                ++residents[text("host_id")];
            } else if (e.type == "ObjectMigratedEvent") {
                ASSERT_EQ(where[text("co_id")], text("source"));
                --residents[text("source")];
                ++residents[text("dest")];
                where[text("co_id")] = text("dest");
            } else if (e.type == "ObjectDestroyedEvent") {
                --residents[where.at(text("co_id"))];
                where.erase(text("co_id"));
            } else if (e.type == "HostTerminatedEvent") {
                ASSERT_EQ(residents[text("host_id")], 0) << "released a host with residents";
            }
        }
        for (auto const& c : live) {
            ASSERT_EQ(where.at(c.id().hex()), h.mgr->describe(c.id())->resident_on->hex());
        }
    }
}
