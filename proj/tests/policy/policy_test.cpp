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

#include "support/generators.hpp"

#include <elastikit/core/error.hpp>
#include <elastikit/policy/policy.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <thread>

using namespace elastikit;
using namespace elastikit::policy;
using namespace std::chrono_literals;

namespace {

CloudHostId hid(std::uint64_t n) { return CloudHostId::from_parts(0xa, n); }

HostPoolView pool_of(std::vector<std::size_t> residents) {
    HostPoolView p;
    for (std::size_t i = 0; i < residents.size(); ++i) {
        p.hosts.push_back({hid(i + 1), "127.0.0.1:" + std::to_string(9000 + i), residents[i], 0, 1000});
    }
    return p;
}

events::MonitoringRepository repo_with(std::optional<double> utilization) {
    events::MonitoringRepository r;
    r.add_row(std::string(kUtilizationMetric));
    if (utilization) r.write(std::string(kUtilizationMetric), Value::float64(*utilization), 0);
    return r;
}

CloudObjectDescriptor desc() { return {CloudObjectId::from_parts(1, 1), "Counter", std::nullopt, {}}; }

ScalingDecision use(std::uint64_t n) { return {UseExisting{hid(n)}, {}}; }
ScalingDecision provision() { return {ProvisionNew{}, {}}; }

}// namespace

TEST(SingleHostPolicy, ProvisionsOnceThenReuses) {
    SingleHost p;
    EXPECT_EQ(p.on_schedule(desc(), pool_of({}), repo_with(0.9)), provision());
    EXPECT_EQ(p.on_schedule(desc(), pool_of({4}), repo_with(0.9)), use(1));
    EXPECT_EQ(p.on_billing_boundary(hid(1), pool_of({0}), repo_with(0.0)), BillingDecision::Keep);
}

TEST(RoundRobinPolicy, ThreeObjectsOverTwoHosts) {
    RoundRobinFixed p(2);
    auto pool = pool_of({});
    std::vector<std::size_t> counts;
    for (int i = 0; i < 3; ++i) {
        auto d = p.on_schedule(desc(), pool, repo_with(std::nullopt));
        if (d.provisions()) {
            pool.hosts.push_back({hid(pool.size() + 1), "", 1, 0, 0});
        } else {
            pool.hosts[std::get<UseExisting>(d.placement).host == hid(1) ? 0 : 1].residents++;
        }
    }
    ASSERT_EQ(pool.size(), 2u);
    std::vector<std::size_t> got{pool.hosts[0].residents, pool.hosts[1].residents};
    std::sort(got.rbegin(), got.rend());
    EXPECT_EQ(got, (std::vector<std::size_t>{2, 1}));
}

struct ThresholdRow {
    std::optional<double> utilization;
    std::vector<std::size_t> residents;
    ScalingDecision expected;
};

TEST(ThresholdPolicy, ScheduleTable) {
    ThresholdScaler p(0.8, 0.2, 4);
    std::vector<ThresholdRow> rows = {
        {0.9, {1, 1}, provision()},
        {0.5, {3, 1}, use(2)},
        {0.5, {2, 2}, use(1)},
        {0.9, {1, 1, 1, 1}, use(1)},// at quota
        {std::nullopt, {0, 2}, use(1)},
        {0.8, {1, 0}, use(2)},// strictly above hi provisions
        {0.0, {}, provision()},
    };
    for (auto const& r : rows) {
        EXPECT_EQ(p.on_schedule(desc(), pool_of(r.residents), repo_with(r.utilization)), r.expected)
            << "utilization " << r.utilization.value_or(-1) << " pool " << r.residents.size();
    }
}

TEST(ThresholdPolicy, BillingTable) {
    ThresholdScaler p(0.8, 0.2, 4);
    EXPECT_EQ(p.on_billing_boundary(hid(1), pool_of({0}), repo_with(0.1)), BillingDecision::Destroy);
    EXPECT_EQ(p.on_billing_boundary(hid(1), pool_of({0}), repo_with(std::nullopt)), BillingDecision::Destroy);
    EXPECT_EQ(p.on_billing_boundary(hid(1), pool_of({1}), repo_with(0.1)), BillingDecision::Keep);
    EXPECT_EQ(p.on_billing_boundary(hid(1), pool_of({0}), repo_with(0.5)), BillingDecision::Keep);
    EXPECT_EQ(p.on_billing_boundary(hid(9), pool_of({0}), repo_with(0.0)), BillingDecision::Keep);
}

TEST(PolicyProperty, DefaultsAreDeterministicWithLowestIdTieBreak) {
    testkit::Gen g(424242);
    std::vector<std::unique_ptr<ScalingPolicy>> ps;
    ps.push_back(std::make_unique<SingleHost>());
    ps.push_back(std::make_unique<RoundRobinFixed>(3));
    ps.push_back(std::make_unique<ThresholdScaler>(0.8, 0.2, 4));
    for (int i = 0; i < 500; ++i) {
        std::vector<std::size_t> res(g.index(6));
        for (auto& r : res) r = g.index(3);
        auto pool = pool_of(res);
        std::reverse(pool.hosts.begin(), pool.hosts.end());// input order must not matter
        auto repo = repo_with(g.real(0.0, 1.2));
        for (auto& p : ps) {
            auto a = p->on_schedule(desc(), pool, repo);
            auto b = p->on_schedule(desc(), pool, repo);
            ASSERT_EQ(a, b);
            if (auto const* u = std::get_if<UseExisting>(&a.placement)) {
                auto const* chosen = pool.find(u->host);
                ASSERT_NE(chosen, nullptr);
                if (p->name() != "single") {
                    for (auto const& h : pool.hosts) {
                        ASSERT_TRUE(chosen->residents < h.residents ||
                                    (chosen->residents == h.residents && chosen->id <= h.id));
                    }
                }
            }
        }
    }
}

TEST(PolicyProperty, RoundRobinSpreadAtMostOne) {
    testkit::Gen g(77);
    for (int round = 0; round < 100; ++round) {
        auto n = 1 + g.index(5);
        RoundRobinFixed p(n);
        auto pool = pool_of(std::vector<std::size_t>(n, 0));
        auto m = g.index(40);
        for (std::size_t i = 0; i < m; ++i) {
            auto d = p.on_schedule(desc(), pool, repo_with(std::nullopt));
            ASSERT_FALSE(d.provisions());
            for (auto& h : pool.hosts) {
                if (h.id == std::get<UseExisting>(d.placement).host) ++h.residents;
            }
        }
        auto [lo, hi] = std::minmax_element(pool.hosts.begin(), pool.hosts.end(),
                                            [](auto const& a, auto const& b) { return a.residents < b.residents; });
        EXPECT_LE(hi->residents - lo->residents, 1u);
    }
}

TEST(PolicyProperty, ThresholdNeverExceedsQuota) {
    testkit::Gen g(5150);
    for (int i = 0; i < 1000; ++i) {
        auto quota = 1 + g.index(5);
        ThresholdScaler p(0.8, 0.2, quota);
        std::vector<std::size_t> res(quota);
        for (auto& r : res) r = g.index(4);
        auto d = p.on_schedule(desc(), pool_of(res), repo_with(g.real(0.0, 5.0)));
        EXPECT_FALSE(d.provisions());
    }
}

TEST(PolicyFactory, ParsesConfigForms) {
    EXPECT_EQ(make_policy("single", 4)->name(), "single");
    EXPECT_EQ(make_policy("roundrobin:3", 4)->name(), "roundrobin:3");
    EXPECT_EQ(make_policy("threshold:0.8,0.2", 4)->name(), "threshold:0.8,0.2,4");
    EXPECT_EQ(make_policy("threshold:0.9,0.1,2", 4)->name(), "threshold:0.9,0.1,2");
    for (auto bad : {"", "roundrobin", "roundrobin:0", "roundrobin:x", "threshold:0.8", "threshold:0.2,0.8",
                     "single:1", "nope"}) {
        try {
            make_policy(bad, 4);
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidConfig) << bad;
        }
    }
}

TEST(PolicyFactory, CustomPoliciesRegisterByName) {
    register_policy("always-new", [](std::string_view, std::size_t) -> std::unique_ptr<ScalingPolicy> {
        struct AlwaysNew : ScalingPolicy {
            std::string name() const override { return "always-new"; }
            ScalingDecision on_schedule(const CloudObjectDescriptor&, const HostPoolView&,
                                        const events::MonitoringRepository&) override {
                return {ProvisionNew{}, {}};
            }
            BillingDecision on_billing_boundary(const CloudHostId&, const HostPoolView&,
                                                const events::MonitoringRepository&) override {
                return BillingDecision::Destroy;
            }
        };
        return std::make_unique<AlwaysNew>();
    });
    EXPECT_EQ(make_policy("always-new", 1)->name(), "always-new");
    EXPECT_THROW(register_policy("always-new", nullptr), Error);
    EXPECT_THROW(register_policy("single", nullptr), Error);
}

TEST(PolicyValidation, RejectsUnknownHosts) {
    auto pool = pool_of({0, 0});
    EXPECT_NO_THROW(validate(use(2), pool));
    EXPECT_NO_THROW(validate(provision(), pool));
    try {
        validate(use(3), pool);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PolicyError);
    }
    ScalingDecision d{ProvisionNew{}, {{CloudObjectId::from_parts(1, 1), hid(7)}}};
    EXPECT_THROW(validate(d, pool), Error);
}

namespace {

struct Scripted : ScalingPolicy {
    std::function<void()> action;
    std::atomic<int> concurrent{0};
    std::atomic<int> max_concurrent{0};
    std::string name() const override { return "scripted"; }
    ScalingDecision on_schedule(const CloudObjectDescriptor&, const HostPoolView&,
                                const events::MonitoringRepository&) override {
        enter();
        return provision();
    }
    BillingDecision on_billing_boundary(const CloudHostId&, const HostPoolView&,
                                        const events::MonitoringRepository&) override {
        enter();
        return BillingDecision::Destroy;
    }
    void enter() {
        auto c = ++concurrent;
        max_concurrent = std::max(max_concurrent.load(), c);
        struct Leave {
            std::atomic<int>& n;
            ~Leave() { --n; }
        } leave{concurrent};
        if (action) action();
    }
};

}// namespace

TEST(PolicyRunnerTest, PassesDecisionsThrough) {
    auto p = std::make_shared<Scripted>();
    PolicyRunner r(p, 1000ms);
    EXPECT_EQ(r.schedule(desc(), pool_of({}), repo_with(0.0)), provision());
    auto b = r.billing(hid(1), pool_of({0}), repo_with(0.0));
    EXPECT_EQ(b.decision, BillingDecision::Destroy);
    EXPECT_FALSE(b.failure);
}

TEST(PolicyRunnerTest, TimeoutAndPanic) {
    auto p = std::make_shared<Scripted>();
    p->action = [] { std::this_thread::sleep_for(200ms); };
    PolicyRunner r(p, 50ms);
    try {
        (void)r.schedule(desc(), pool_of({}), repo_with(0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PolicyTimeout);
    }
    auto b = r.billing(hid(1), pool_of({0}), repo_with(0.0));
    EXPECT_EQ(b.decision, BillingDecision::Keep);
    EXPECT_EQ(b.failure, ErrorCode::PolicyTimeout);

    std::this_thread::sleep_for(500ms);
    p->action = [] { throw std::runtime_error("kaboom"); };
    try {
        (void)r.schedule(desc(), pool_of({}), repo_with(0.0));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PolicyPanic);
        EXPECT_NE(e.detail().find("kaboom"), std::string::npos);
    }
    b = r.billing(hid(1), pool_of({0}), repo_with(0.0));
    EXPECT_EQ(b.decision, BillingDecision::Keep);
    EXPECT_EQ(b.failure, ErrorCode::PolicyPanic);
    EXPECT_EQ(p->max_concurrent.load(), 1);
}
