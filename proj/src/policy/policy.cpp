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
#include <elastikit/policy/policy.hpp>

#include <algorithm>
#include <charconv>
#include <future>
#include <map>
#include <sstream>
#include <thread>

namespace elastikit::policy {

const HostView* HostPoolView::find(const CloudHostId& id) const {
    for (auto const& h : hosts) {
        if (h.id == id) return &h;
    }
    return nullptr;
}

const HostView* HostPoolView::least_loaded() const {
    const HostView* best = nullptr;
    for (auto const& h : hosts) {
        if (best == nullptr || h.residents < best->residents || (h.residents == best->residents && h.id < best->id)) {
            best = &h;
        }
    }
    return best;
}

std::string_view to_string(BillingDecision d) noexcept { return d == BillingDecision::Keep ? "Keep" : "Destroy"; }

std::string to_string(const ScalingDecision& d) {
    std::ostringstream os;
    if (auto const* u = std::get_if<UseExisting>(&d.placement)) {
        os << "UseExisting(" << u->host.hex() << ")";
    } else {
        os << "ProvisionNew";
    }
    for (auto const& m : d.migrations) {
        os << " migrate " << m.object.hex() << "->" << m.dest.hex();
    }
    return os.str();
}

// ---------------------------------------------------------------------------

ScalingDecision SingleHost::on_schedule(const CloudObjectDescriptor&, const HostPoolView& pool,
                                        const events::MonitoringRepository&) {
    if (pool.empty()) {
        return {ProvisionNew{}, {}};
    }
    auto lowest = std::min_element(pool.hosts.begin(), pool.hosts.end(),
                                   [](const HostView& a, const HostView& b) { return a.id < b.id; });
    return {UseExisting{lowest->id}, {}};
}

RoundRobinFixed::RoundRobinFixed(std::size_t n) : n_(n) {
    if (n == 0) throw Error(ErrorCode::InvalidConfig, "roundrobin needs at least one host");
}

ScalingDecision RoundRobinFixed::on_schedule(const CloudObjectDescriptor&, const HostPoolView& pool,
                                             const events::MonitoringRepository&) {
    if (pool.size() < n_) {
        return {ProvisionNew{}, {}};
    }
    return {UseExisting{pool.least_loaded()->id}, {}};
}

ThresholdScaler::ThresholdScaler(double hi, double lo, std::size_t quota) : hi_(hi), lo_(lo), quota_(quota) {
    if (!(lo >= 0.0) || !(hi > lo)) throw Error(ErrorCode::InvalidConfig, "threshold needs 0 <= lo < hi");
    if (quota == 0) throw Error(ErrorCode::InvalidConfig, "threshold quota must be positive");
}

std::string ThresholdScaler::name() const {
    std::ostringstream os;
    os << "threshold:" << hi_ << "," << lo_ << "," << quota_;
    return os.str();
}

ScalingDecision ThresholdScaler::on_schedule(const CloudObjectDescriptor&, const HostPoolView& pool,
                                             const events::MonitoringRepository& repo) {
    if (pool.empty()) {
        return {ProvisionNew{}, {}};
    }
    double u = repo.number_or(std::string(kUtilizationMetric), 0.0);
    if (u > hi_ && pool.size() < quota_) {
        return {ProvisionNew{}, {}};
    }
    return {UseExisting{pool.least_loaded()->id}, {}};
}

BillingDecision ThresholdScaler::on_billing_boundary(const CloudHostId& host, const HostPoolView& pool,
                                                     const events::MonitoringRepository& repo) {
    auto const* h = pool.find(host);
    if (h == nullptr || h->residents > 0) {
        return BillingDecision::Keep;
    }
    double u = repo.number_or(std::string(kUtilizationMetric), 0.0);
    return u < lo_ ? BillingDecision::Destroy : BillingDecision::Keep;
}

// ---------------------------------------------------------------------------

namespace {

std::mutex& registry_mu() {
    static std::mutex mu;
    return mu;
}

std::map<std::string, PolicyFactory, std::less<>>& registry() {
    static std::map<std::string, PolicyFactory, std::less<>> r;
    return r;
}

bool is_builtin(std::string_view name) { return name == "single" || name == "roundrobin" || name == "threshold"; }

[[noreturn]] void bad(std::string_view spec, const std::string& why) {
    throw Error(ErrorCode::InvalidConfig, "policy '" + std::string(spec) + "': " + why);
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.emplace_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

double parse_ratio(std::string_view spec, const std::string& s) {
    double d = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), d);
    if (ec != std::errc{} || p != s.data() + s.size()) bad(spec, "bad number '" + s + "'");
    return d;
}

std::size_t parse_count(std::string_view spec, const std::string& s) {
    std::size_t n = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
    if (ec != std::errc{} || p != s.data() + s.size() || n == 0) bad(spec, "bad count '" + s + "'");
    return n;
}

}// namespace

void register_policy(const std::string& name, PolicyFactory factory) {
    if (name.empty() || is_builtin(name) || name.find(':') != std::string::npos) {
        throw Error(ErrorCode::InvalidConfig, "invalid policy name '" + name + "'");
    }
    std::lock_guard lock(registry_mu());
    if (!registry().emplace(name, std::move(factory)).second) {
        throw Error(ErrorCode::InvalidConfig, "policy '" + name + "' already registered");
    }
}

std::unique_ptr<ScalingPolicy> make_policy(std::string_view spec, std::size_t quota) {
    auto colon = spec.find(':');
    auto name = spec.substr(0, colon);
    auto args = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (name == "single") {
        if (!args.empty()) bad(spec, "takes no arguments");
        return std::make_unique<SingleHost>();
    }
    if (name == "roundrobin") {
        if (args.empty()) bad(spec, "expected roundrobin:<n>");
        return std::make_unique<RoundRobinFixed>(parse_count(spec, std::string(args)));
    }
    if (name == "threshold") {
        auto parts = split(args, ',');
        if (args.empty() || parts.size() < 2 || parts.size() > 3) bad(spec, "expected threshold:<hi>,<lo>[,<quota>]");
        auto q = parts.size() == 3 ? parse_count(spec, parts[2]) : quota;
        return std::make_unique<ThresholdScaler>(parse_ratio(spec, parts[0]), parse_ratio(spec, parts[1]), q);
    }
    PolicyFactory factory;
    {
        std::lock_guard lock(registry_mu());
        auto it = registry().find(name);
        if (it == registry().end()) bad(spec, "unknown policy");
        factory = it->second;
    }
    auto p = factory(args, quota);
    if (!p) bad(spec, "factory returned nothing");
    return p;
}

void validate(const ScalingDecision& d, const HostPoolView& pool) {
    if (auto const* u = std::get_if<UseExisting>(&d.placement); u && pool.find(u->host) == nullptr) {
        throw Error(ErrorCode::PolicyError, "placement on unknown host " + u->host.hex());
    }
    for (auto const& m : d.migrations) {
        if (pool.find(m.dest) == nullptr) {
            throw Error(ErrorCode::PolicyError, "migration to unknown host " + m.dest.hex());
        }
    }
}

// ---------------------------------------------------------------------------

PolicyRunner::PolicyRunner(std::shared_ptr<ScalingPolicy> policy, std::chrono::milliseconds deadline)
    : policy_(std::move(policy)), deadline_(deadline) {
    if (!policy_) throw Error(ErrorCode::InvalidConfig, "no scaling policy");
}

template <typename R>
R PolicyRunner::run(std::function<R(ScalingPolicy&)> fn) {
    auto task = std::make_shared<std::packaged_task<R()>>(
        [policy = policy_, mu = call_mu_, fn = std::move(fn)]() -> R {
            std::lock_guard lock(*mu);
            return fn(*policy);
        });
    auto result = task->get_future();
    std::thread([task] { (*task)(); }).detach();
    if (result.wait_for(deadline_) != std::future_status::ready) {
        throw Error(ErrorCode::PolicyTimeout,
                    policy_->name() + " exceeded " + std::to_string(deadline_.count()) + " ms");
    }
    try {
        return result.get();
    } catch (const Error& e) {
        throw Error(ErrorCode::PolicyPanic, std::string(to_string(e.code())) + ": " + e.detail());
    } catch (const std::exception& e) {
        throw Error(ErrorCode::PolicyPanic, e.what());
    } catch (...) {
        throw Error(ErrorCode::PolicyPanic, "non-standard exception");
    }
}

ScalingDecision PolicyRunner::schedule(const CloudObjectDescriptor& desc, HostPoolView pool,
                                       events::MonitoringRepository repo) {
    return run<ScalingDecision>(
        [desc, pool = std::move(pool), repo = std::move(repo)](ScalingPolicy& p) {
            return p.on_schedule(desc, pool, repo);
        });
}

PolicyRunner::BillingOutcome PolicyRunner::billing(const CloudHostId& host, HostPoolView pool,
                                                   events::MonitoringRepository repo) {
    try {
        auto d = run<BillingDecision>([host, pool = std::move(pool), repo = std::move(repo)](ScalingPolicy& p) {
            return p.on_billing_boundary(host, pool, repo);
        });
        return {d, std::nullopt, {}};
    } catch (const Error& e) {
        return {BillingDecision::Keep, e.code(), e.detail()};
    }
}

}// namespace elastikit::policy
