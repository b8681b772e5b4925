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
#include <elastikit/hostd/builtin.hpp>
#include <elastikit/manager/manager.hpp>

#include <chrono>

namespace elastikit::manager {

namespace {

constexpr std::chrono::milliseconds kTickInterval{100};
constexpr std::chrono::seconds kHandshakeTimeout{10};

Error wrap(ErrorCode code, const Error& cause) {
    return Error(code, std::string(to_string(cause.code())) + ": " + cause.detail());
}

}// namespace

// ---------------------------------------------------------------------------
// CloudObjectHandle

Value CloudObjectHandle::invoke(const std::string& method, List args) const {
    return manager_->invoke(id_, method, std::move(args));
}

Value CloudObjectHandle::get(const std::string& field) const { return manager_->get_field(id_, field); }

void CloudObjectHandle::set(const std::string& field, Value value) const {
    manager_->set_field(id_, field, std::move(value));
}

void CloudObjectHandle::destroy() const { manager_->destroy_object(id_); }

// ---------------------------------------------------------------------------
// Construction

CloudManager::CloudManager(ManagerConfig config, const hostd::ClassRegistry& registry,
                           std::shared_ptr<policy::ScalingPolicy> policy)
    : config_(std::move(config)), registry_(registry) {
    if (config_.simulated()) {
        auto vc = std::make_unique<VirtualClock>();
        virtual_clock_ = vc.get();
        clock_ = std::move(vc);
    } else if (config_.backend == "local") {
        clock_ = std::make_unique<SteadyClock>();
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown backend '" + config_.backend + "'");
    }
    bus_ = std::make_unique<events::EventBus>(*clock_, engine_);

    auto window = config_.utilization_window_ms;
    engine_.register_metric(
        {std::string(kBusyMetric), events::MetricType::Int64,
         events::MetricStatement::parse("SELECT sum(duration) FROM ExecutionFinished WINDOW time_batch(" +
                                        std::to_string(window) + ")")},
        clock_->now_ms());
    engine_.register_derived(std::string(policy::kUtilizationMetric), std::string(kBusyMetric),
                             [this, window](const Value& busy) {
                                 auto hosts = online_hosts_.load();
                                 if (!busy.is_numeric() || hosts == 0) return Value::float64(0.0);
                                 return Value::float64(busy.as_number() /
                                                       (static_cast<double>(window) * static_cast<double>(hosts)));
                             });

    callback_ = std::make_unique<CallbackServer>(config_.listen_callback, registry_.digest(), *bus_, globals_,
                                                 artifacts_);

    if (config_.simulated()) {
        backend::SimulatedOptions o;
        o.max_hosts = config_.max_hosts;
        if (config_.billing_time_unit_ms > 0) o.billing_time_unit_ms = config_.billing_time_unit_ms;
        o.startup_delay_ms = config_.startup_delay_ms;
        o.callback = callback_->endpoint();
        backend_ = std::make_unique<backend::SimulatedBackend>(*virtual_clock_, *bus_, registry_, o);
    } else {
        if (registry_.digest() != builtin::builtin_registry().digest()) {
            throw Error(ErrorCode::InvalidConfig, "local hosts serve the built-in class registry only");
        }
        backend::LocalOptions o;
        o.hostd_path = resolve_hostd_path(config_.hostd_path);
        o.callback = callback_->endpoint();
        o.max_hosts = config_.max_hosts;
        if (config_.billing_time_unit_ms > 0) o.billing_time_unit_ms = config_.billing_time_unit_ms;
        backend_ = std::make_unique<backend::LocalBackend>(*clock_, *bus_, o);
    }

    if (!policy) policy = policy::make_policy(config_.policy, config_.max_hosts);
    runner_ = std::make_unique<policy::PolicyRunner>(std::move(policy),
                                                     std::chrono::milliseconds(config_.policy_deadline_ms));
    backend_->set_billing_handler([this](const CloudHostId& id) { billing_tick(id); });

    if (!clock_->is_virtual()) {
        ticker_ = std::thread([this] {
            std::unique_lock lock(ticker_mu_);
            while (running_) {
                ticker_cv_.wait_for(lock, kTickInterval);
                bus_->tick();
            }
        });
    }
}

CloudManager::~CloudManager() { shutdown(); }

void CloudManager::shutdown() {
    if (!running_.exchange(false)) return;
    ticker_cv_.notify_all();
    if (ticker_.joinable()) ticker_.join();
    backend_->set_billing_handler(nullptr);
    {
        std::lock_guard sched(sched_mu_);
        std::map<CloudHostId, std::shared_ptr<HostLink>> links;
        {
            std::lock_guard lock(links_mu_);
            links.swap(links_);
        }
        for (auto& [id, l] : links) {
            l->closing = true;
            l->channel->close();
        }
        online_hosts_ = 0;
    }
    // Outside the scheduler lock: a billing thread blocked on it must be able
    // to finish before the backend joins it.
    backend_->shutdown();
    callback_->shutdown();
    gate_->close();
    bus_->flush();
}

backend::SimulatedBackend* CloudManager::simulated_backend() {
    return dynamic_cast<backend::SimulatedBackend*>(backend_.get());
}

backend::LocalBackend* CloudManager::local_backend() { return dynamic_cast<backend::LocalBackend*>(backend_.get()); }

void CloudManager::emit(std::string_view type, Map props) {
    bus_->emit(MonitoringEvent{std::string(type), 0, EventSource::manager(), std::move(props)});
}

// ---------------------------------------------------------------------------
// Hosts

std::shared_ptr<CloudManager::HostLink> CloudManager::link(const CloudHostId& id) const {
    std::lock_guard lock(links_mu_);
    auto it = links_.find(id);
    return it == links_.end() ? nullptr : it->second;
}

std::shared_ptr<CloudManager::HostLink> CloudManager::connect_host(const backend::CloudHostRecord& record) {
    auto l = std::make_shared<HostLink>();
    l->id = record.id;
    l->endpoint = record.endpoint;
    l->provisioned_at = record.provisioned_at;
    auto gate = gate_;
    std::weak_ptr<HostLink> weak = l;
    l->channel = wire::Channel::start(
        wire::Socket::connect(record.endpoint),
        [gate, this](const std::shared_ptr<wire::Channel>& ch, wire::DecodedFrame f) {
            auto pass = gate->enter();
            if (!pass) return;
            if (auto* push = std::get_if<wire::EventPush>(&f.message)) {
                bus_->emit(std::move(push->event));
            } else if (f.request_id != 0) {
                try {
                    ch->reply(f.request_id, wire::Err{ErrorCode::UnknownMsgType, "hosts do not call the manager here"});
                } catch (const Error&) {
                }
            }
        },
        [gate, this, weak] {
            auto pass = gate->enter();
            if (!pass) return;
            auto l = weak.lock();
            if (l && !l->closing) mark_lost(*l);
        });
    wire::unwrap(l->channel->call(wire::Hello{wire::kProtocolVersion, registry_.digest().bytes()}, kHandshakeTimeout));
    {
        std::lock_guard lock(links_mu_);
        links_.emplace(l->id, l);
    }
    ++online_hosts_;
    return l;
}

std::shared_ptr<CloudManager::HostLink> CloudManager::provision_host() {
    auto record = backend_->provision("default");
    try {
        return connect_host(record);
    } catch (const Error&) {
        try {
            backend_->terminate(record.id);
        } catch (const Error&) {
        }
        throw;
    }
}

void CloudManager::release_host(const std::shared_ptr<HostLink>& l) {
    l->closing = true;
    {
        std::lock_guard lock(links_mu_);
        links_.erase(l->id);
    }
    mark_lost(*l);
    l->channel->close();
    try {
        backend_->terminate(l->id);
    } catch (const Error&) {
        // already gone (killed)
    }
}

void CloudManager::mark_lost(HostLink& l) {
    if (!l.lost.exchange(true)) --online_hosts_;
}

policy::HostPoolView CloudManager::pool_view_locked() const {
    policy::HostPoolView view;
    auto now = clock_->now_ms();
    auto btu = backend_->billing_time_unit_ms();
    std::lock_guard lock(links_mu_);
    for (auto const& [id, l] : links_) {
        if (l->lost || l->closing) continue;
        auto age = std::max<std::int64_t>(0, now - l->provisioned_at);
        view.hosts.push_back({id, l->endpoint.to_string(), l->residents.load(), age, btu - age % btu});
    }
    return view;
}

policy::HostPoolView CloudManager::pool_view() const { return pool_view_locked(); }

events::MonitoringRepository CloudManager::current_repository() {
    bus_->tick();
    bus_->flush();
    return engine_.snapshot();
}

// ---------------------------------------------------------------------------
// Objects

std::shared_ptr<CloudManager::ObjectEntry> CloudManager::entry(const CloudObjectId& id) const {
    std::lock_guard lock(objects_mu_);
    auto it = objects_.find(id);
    if (it == objects_.end()) throw Error(ErrorCode::UnknownCO, id.hex());
    return it->second;
}

CloudObjectHandle CloudManager::handle(const CloudObjectId& id) {
    auto e = entry(id);
    std::lock_guard lock(e->desc_mu);
    return {*this, id, e->desc.class_name};
}

std::optional<CloudObjectDescriptor> CloudManager::describe(const CloudObjectId& id) const {
    std::shared_ptr<ObjectEntry> e;
    {
        std::lock_guard lock(objects_mu_);
        auto it = objects_.find(id);
        if (it == objects_.end()) return std::nullopt;
        e = it->second;
    }
    std::lock_guard lock(e->desc_mu);
    return e->desc;
}

std::vector<CloudObjectDescriptor> CloudManager::objects() const {
    std::vector<std::shared_ptr<ObjectEntry>> entries;
    {
        std::lock_guard lock(objects_mu_);
        for (auto const& [id, e] : objects_) entries.push_back(e);
    }
    std::vector<CloudObjectDescriptor> out;
    for (auto const& e : entries) {
        std::lock_guard lock(e->desc_mu);
        out.push_back(e->desc);
    }
    return out;
}

CloudObjectHandle CloudManager::deploy_object(const std::string& class_name, List ctor_args) {
    std::lock_guard sched(sched_mu_);
    if (!running_) throw Error(ErrorCode::DeployFailed, "manager is shut down");
    auto const& spec = registry_.get(class_name);
    hostd::check_args(class_name + " constructor", spec.ctor_params, ctor_args);

    CloudObjectDescriptor desc{ids_.next<CloudObjectId>(), class_name, std::nullopt, ObjectState::Scheduling};
    auto pool = pool_view_locked();
    policy::ScalingDecision decision;
    try {
        decision = runner_->schedule(desc, pool, current_repository());
    } catch (const Error& e) {
        throw wrap(ErrorCode::PolicyError, e);
    }
    policy::validate(decision, pool);
    for (auto const& m : decision.migrations) {
        auto d = describe(m.object);
        if (!d || d->state != ObjectState::Deployed) {
            throw Error(ErrorCode::PolicyError, "migration of unknown or inactive object " + m.object.hex());
        }
    }

    for (auto const& m : decision.migrations) {
        try {
            migrate_locked(m.object, m.dest);
        } catch (const Error& e) {
            throw wrap(ErrorCode::DeployFailed, e);
        }
    }
    std::shared_ptr<HostLink> target;
    bool fresh = false;
    if (decision.provisions()) {
        try {
            target = provision_host();
        } catch (const Error& e) {
            throw wrap(ErrorCode::ProvisionFailed, e);
        }
        fresh = true;
    } else {
        target = link(std::get<policy::UseExisting>(decision.placement).host);
    }

    emit(event_type::ObjectScheduled, {{"class", Value::text(class_name)},
                                       {"co_id", Value::text(desc.id.hex())},
                                       {"host_id", Value::text(target->id.hex())}});
    auto e = std::make_shared<ObjectEntry>();
    e->desc = desc;
    {
        std::lock_guard lock(objects_mu_);
        objects_.emplace(desc.id, e);
    }
    try {
        wire::unwrap(target->channel->call(wire::DeployCO{desc.id, class_name, std::move(ctor_args)}));
    } catch (const Error& err) {
        {
            std::lock_guard lock(objects_mu_);
            objects_.erase(desc.id);
        }
        if (fresh && target->residents == 0) release_host(target);
        throw wrap(ErrorCode::DeployFailed, err);
    }
    {
        std::lock_guard lock(e->desc_mu);
        e->desc.state = ObjectState::Deployed;
        e->desc.resident_on = target->id;
    }
    ++target->residents;
    return {*this, desc.id, class_name};
}

Value CloudManager::call_object(const CloudObjectId& id, const wire::Message& request, const std::string& what) {
    auto e = entry(id);
    std::shared_lock op(e->op_mu);
    CloudHostId host;
    {
        std::lock_guard lock(e->desc_mu);
        if (e->desc.state == ObjectState::Destroyed) throw Error(ErrorCode::ObjectDestroyed, id.hex());
        host = *e->desc.resident_on;
    }
    auto l = link(host);
    wire::Message reply;
    try {
        if (!l) throw Error(ErrorCode::ConnectionClosed, "no link to " + host.hex());
        reply = l->channel->call(request);
    } catch (const Error& err) {
        if (l) mark_lost(*l);
        if (auto const* inv = std::get_if<wire::InvokeCO>(&request)) {
            emit(event_type::ExecutionFailed, {{"co_id", Value::text(id.hex())},
                                               {"error", Value::text("host unreachable")},
                                               {"host_id", Value::text(host.hex())},
                                               {"method", Value::text(inv->method)}});
        }
        throw Error(ErrorCode::HostUnreachable, what + ": " + err.detail());
    }
    return wire::unwrap(reply);
}

Value CloudManager::invoke(const CloudObjectId& id, const std::string& method, List args) {
    return call_object(id, wire::InvokeCO{id, method, std::move(args)}, method);
}

Value CloudManager::get_field(const CloudObjectId& id, const std::string& field) {
    return call_object(id, wire::GetField{id, field}, field);
}

void CloudManager::set_field(const CloudObjectId& id, const std::string& field, Value value) {
    call_object(id, wire::SetField{id, field, std::move(value)}, field);
}

void CloudManager::destroy_object(const CloudObjectId& id) {
    auto e = entry(id);
    std::unique_lock op(e->op_mu);
    CloudHostId host;
    {
        std::lock_guard lock(e->desc_mu);
        if (e->desc.state == ObjectState::Destroyed) throw Error(ErrorCode::ObjectDestroyed, id.hex());
        host = *e->desc.resident_on;
    }
    auto l = link(host);
    wire::Message reply;
    try {
        if (!l) throw Error(ErrorCode::ConnectionClosed, "no link to " + host.hex());
        reply = l->channel->call(wire::DestroyCO{id});
    } catch (const Error& err) {
        if (l) mark_lost(*l);
        throw Error(ErrorCode::HostUnreachable, "destroy: " + err.detail());
    }
    wire::unwrap(reply);
    {
        std::lock_guard lock(e->desc_mu);
        e->desc.state = ObjectState::Destroyed;
        e->desc.resident_on.reset();
    }
    --l->residents;
    emit(event_type::ObjectDestroyed, {{"co_id", Value::text(id.hex())}, {"host_id", Value::text(host.hex())}});
}

// ---------------------------------------------------------------------------
// Migration and billing

void CloudManager::migrate(const CloudObjectId& id, const CloudHostId& dest) {
    std::lock_guard sched(sched_mu_);
    migrate_locked(id, dest);
}

void CloudManager::migrate_locked(const CloudObjectId& id, const CloudHostId& dest) {
    auto e = entry(id);
    std::unique_lock op(e->op_mu, std::try_to_lock);
    if (!op.owns_lock()) throw Error(ErrorCode::NotQuiescent, id.hex() + " has calls in flight");
    CloudHostId source;
    std::string class_name;
    {
        std::lock_guard lock(e->desc_mu);
        if (e->desc.state == ObjectState::Destroyed) throw Error(ErrorCode::ObjectDestroyed, id.hex());
        source = *e->desc.resident_on;
        class_name = e->desc.class_name;
    }
    if (source == dest) return;
    auto src = link(source);
    auto dst = link(dest);
    if (!dst || dst->lost || dst->closing) throw Error(ErrorCode::DestUnreachable, dest.hex());
    if (!src || src->lost) throw Error(ErrorCode::HostUnreachable, source.hex());

    auto set_state = [&](ObjectState s) {
        std::lock_guard lock(e->desc_mu);
        e->desc.state = s;
    };
    auto t0 = clock_->now_ms();
    auto wall0 = std::chrono::steady_clock::now();
    set_state(ObjectState::Migrating);

    Bytes state;
    try {
        wire::Message reply;
        try {
            reply = src->channel->call(wire::SnapshotCO{id});
        } catch (const Error& err) {
            throw Error(ErrorCode::HostUnreachable, "snapshot: " + err.detail());
        }
        state = wire::unwrap(reply).as_bytes();
    } catch (const Error&) {
        set_state(ObjectState::Deployed);
        throw;
    }
    try {
        wire::unwrap(dst->channel->call(wire::RestoreCO{id, class_name, std::move(state)}));
    } catch (const Error& err) {
        set_state(ObjectState::Deployed);
        throw wrap(ErrorCode::DestUnreachable, err);
    }
    try {
        wire::unwrap(src->channel->call(wire::DestroyCO{id}));
    } catch (const Error&) {
        // The source copy is unreachable from now on either way.
    }
    {
        std::lock_guard lock(e->desc_mu);
        e->desc.resident_on = dest;
        e->desc.state = ObjectState::Deployed;
    }
    --src->residents;
    ++dst->residents;
    auto duration = clock_->is_virtual() ? clock_->now_ms() - t0
                                         : std::chrono::duration_cast<std::chrono::milliseconds>(
                                               std::chrono::steady_clock::now() - wall0)
                                               .count();
    emit(event_type::ObjectMigrated, {{"co_id", Value::text(id.hex())},
                                      {"dest", Value::text(dest.hex())},
                                      {"duration", Value::int64(duration)},
                                      {"source", Value::text(source.hex())}});
}

void CloudManager::billing_tick(const CloudHostId& host) {
    std::lock_guard sched(sched_mu_);
    if (!running_) return;
    auto l = link(host);
    if (!l) return;
    if (l->lost) {
        if (l->residents == 0) release_host(l);
        return;
    }
    auto outcome = runner_->billing(host, pool_view_locked(), current_repository());
    if (outcome.decision != policy::BillingDecision::Destroy) return;
    if (l->residents > 0) {
        emit(event_type::PolicyDecisionRejected,
             {{"decision", Value::text("Destroy")},
              {"host_id", Value::text(host.hex())},
              {"residents", Value::int64(static_cast<std::int64_t>(l->residents.load()))}});
        return;
    }
    release_host(l);
}

void CloudManager::advance_clock(std::int64_t dt_ms) {
    auto* sim = simulated_backend();
    if (sim == nullptr) throw Error(ErrorCode::InvalidConfig, "advance_clock needs the simulated backend");
    std::lock_guard sched(sched_mu_);
    sim->advance_clock(dt_ms);
}

}// namespace elastikit::manager
