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

#ifndef ELASTIKIT_POLICY_POLICY_HPP
#define ELASTIKIT_POLICY_POLICY_HPP

#include <elastikit/core/ids.hpp>
#include <elastikit/core/types.hpp>
#include <elastikit/events/engine.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace elastikit::policy {

/// Metric the reference policies react to: busy execution time per host
/// over the utilization window, as a ratio in [0, 1] (can exceed 1 when
/// one host runs several objects in parallel).
inline constexpr std::string_view kUtilizationMetric = "host.utilization";

struct HostView {
    CloudHostId id;
    std::string endpoint;
    std::size_t residents = 0;
    std::int64_t age_ms = 0;
    std::int64_t to_next_billing_ms = 0;
};

/// Read-only snapshot of the pool, sorted by host id.
struct HostPoolView {
    std::vector<HostView> hosts;

    [[nodiscard]] std::size_t size() const { return hosts.size(); }
    [[nodiscard]] bool empty() const { return hosts.empty(); }
    [[nodiscard]] const HostView* find(const CloudHostId& id) const;
    /// Fewest residents, lowest id on ties. Null for an empty pool.
    [[nodiscard]] const HostView* least_loaded() const;
};

struct UseExisting {
    CloudHostId host;
    bool operator==(const UseExisting&) const = default;
};
struct ProvisionNew {
    bool operator==(const ProvisionNew&) const = default;
};

struct Migration {
    CloudObjectId object;
    CloudHostId dest;
    bool operator==(const Migration&) const = default;
};

struct ScalingDecision {
    std::variant<UseExisting, ProvisionNew> placement = ProvisionNew{};
    std::vector<Migration> migrations;

    [[nodiscard]] bool provisions() const { return std::holds_alternative<ProvisionNew>(placement); }
    bool operator==(const ScalingDecision&) const = default;
};

enum class BillingDecision : std::uint8_t { Keep, Destroy };

std::string_view to_string(BillingDecision d) noexcept;
std::string to_string(const ScalingDecision& d);

/// Planning stage of the elasticity loop. Implementations are called from
/// one thread at a time and must treat their inputs as read-only.
class ScalingPolicy {
  public:
    virtual ~ScalingPolicy() = default;
    [[nodiscard]] virtual std::string name() const = 0;
    virtual ScalingDecision on_schedule(const CloudObjectDescriptor& desc, const HostPoolView& pool,
                                        const events::MonitoringRepository& repo) = 0;
    virtual BillingDecision on_billing_boundary(const CloudHostId& host, const HostPoolView& pool,
                                                const events::MonitoringRepository& repo) = 0;
};

/// One host, provisioned on first use, never released.
class SingleHost final : public ScalingPolicy {
  public:
    [[nodiscard]] std::string name() const override { return "single"; }
    ScalingDecision on_schedule(const CloudObjectDescriptor&, const HostPoolView& pool,
                                const events::MonitoringRepository&) override;
    BillingDecision on_billing_boundary(const CloudHostId&, const HostPoolView&,
                                        const events::MonitoringRepository&) override {
        return BillingDecision::Keep;
    }
};

/// Grows the pool to n hosts, then spreads objects evenly over it.
class RoundRobinFixed final : public ScalingPolicy {
  public:
    explicit RoundRobinFixed(std::size_t n);
    [[nodiscard]] std::string name() const override { return "roundrobin:" + std::to_string(n_); }
    ScalingDecision on_schedule(const CloudObjectDescriptor&, const HostPoolView& pool,
                                const events::MonitoringRepository&) override;
    BillingDecision on_billing_boundary(const CloudHostId&, const HostPoolView&,
                                        const events::MonitoringRepository&) override {
        return BillingDecision::Keep;
    }

  private:
    std::size_t n_;
};

/// Provisions while utilization is above hi (up to quota hosts) and
/// releases empty hosts at billing boundaries while it is below lo.
class ThresholdScaler final : public ScalingPolicy {
  public:
    ThresholdScaler(double hi, double lo, std::size_t quota);
    [[nodiscard]] std::string name() const override;
    ScalingDecision on_schedule(const CloudObjectDescriptor&, const HostPoolView& pool,
                                const events::MonitoringRepository& repo) override;
    BillingDecision on_billing_boundary(const CloudHostId& host, const HostPoolView& pool,
                                        const events::MonitoringRepository& repo) override;

  private:
    double hi_;
    double lo_;
    std::size_t quota_;
};

using PolicyFactory = std::function<std::unique_ptr<ScalingPolicy>(std::string_view args, std::size_t quota)>;

/// Adds a named policy for make_policy. Throws InvalidConfig on duplicates
/// or when the name shadows a built-in.
void register_policy(const std::string& name, PolicyFactory factory);

/// Builds a policy from its config form: single, roundrobin:<n>,
/// threshold:<hi>,<lo>[,<quota>] or a registered name followed by optional
/// ":<args>". quota is the pool limit used when the spec does not give one.
/// Throws InvalidConfig.
std::unique_ptr<ScalingPolicy> make_policy(std::string_view spec, std::size_t quota);

/// Checks that every host a decision references is in the pool. Throws
/// PolicyError.
void validate(const ScalingDecision& d, const HostPoolView& pool);

/// Runs policy callbacks on a helper thread under a deadline.
///
/// A call that overruns is abandoned, not interrupted: its thread finishes
/// in the background and holds the policy until then, so the next call
/// waits for it within its own deadline.
class PolicyRunner {
  public:
    PolicyRunner(std::shared_ptr<ScalingPolicy> policy, std::chrono::milliseconds deadline);

    /// Throws PolicyTimeout or PolicyPanic.
    ScalingDecision schedule(const CloudObjectDescriptor& desc, HostPoolView pool,
                             events::MonitoringRepository repo);

    struct BillingOutcome {
        BillingDecision decision = BillingDecision::Keep;
        std::optional<ErrorCode> failure;// PolicyTimeout or PolicyPanic, answered as Keep
        std::string detail;
    };
    BillingOutcome billing(const CloudHostId& host, HostPoolView pool, events::MonitoringRepository repo);

    [[nodiscard]] ScalingPolicy& policy() { return *policy_; }
    [[nodiscard]] std::chrono::milliseconds deadline() const { return deadline_; }

  private:
    template <typename R>
    R run(std::function<R(ScalingPolicy&)> fn);

    std::shared_ptr<ScalingPolicy> policy_;
    std::shared_ptr<std::mutex> call_mu_ = std::make_shared<std::mutex>();
    std::chrono::milliseconds deadline_;
};

}// namespace elastikit::policy

#endif// ELASTIKIT_POLICY_POLICY_HPP
