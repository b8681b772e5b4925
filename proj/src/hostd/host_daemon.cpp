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

#include <elastikit/hostd/host_daemon.hpp>

#include <chrono>
#include <shared_mutex>

namespace elastikit::hostd {

namespace {

using Steady = std::chrono::steady_clock;

std::int64_t elapsed_ms(Steady::time_point since) {
    return std::chrono::duration_cast<std::chrono::milliseconds>(Steady::now() - since).count();
}

void safe_reply(const std::shared_ptr<wire::Channel>& ch, std::uint64_t rid, const wire::Message& m) {
    if (rid == 0) {
        return;
    }
    try {
        ch->reply(rid, m);
    } catch (const Error&) {
        // the requester is gone; nothing to answer
    }
}

wire::Err err(ErrorCode code, std::string detail) { return wire::Err{code, std::move(detail)}; }

}// namespace

/// One queued request on a CO lane; run() produces the reply.
struct LaneTask {
    std::shared_ptr<wire::Channel> ch;
    std::uint64_t rid = 0;
    std::function<wire::Message()> run;
};

struct HostDaemon::Sandbox {
    CloudObjectId id;
    const ClassSpec* spec = nullptr;
    Instance instance;
    bool alive = true;// guarded by lane_mu
    std::set<artifacts::Digest> artifact_view;

    std::mutex lane_mu;
    std::deque<LaneTask> queue;
    bool busy = false;
};

class HostDaemon::CallbackOrigin final : public artifacts::ArtifactOrigin {
  public:
    explicit CallbackOrigin(HostDaemon& d) : d_(d) {}

    Bytes fetch(const artifacts::Digest& digest) override {
        auto cb = d_.callback();
        if (!cb || !cb->is_open()) {
            throw Error(ErrorCode::OriginUnreachable, "no manager link");
        }
        wire::Message reply;
        try {
            reply = cb->call(wire::ArtifactFetch{digest});
        } catch (const Error& e) {
            throw Error(ErrorCode::OriginUnreachable, e.detail());
        }
        if (auto const* data = std::get_if<wire::ArtifactData>(&reply)) {
            return data->payload;
        }
        wire::unwrap(reply);// throws the origin's error
        throw Error(ErrorCode::MalformedFrame, "unexpected reply to ArtifactFetch");
    }

  private:
    HostDaemon& d_;
};

class HostDaemon::Context final : public InvocationContext {
  public:
    Context(HostDaemon& d, Sandbox& sb, std::shared_ptr<wire::Channel> ch) : d_(d), sb_(sb), ch_(std::move(ch)) {}

    [[nodiscard]] CloudObjectId self() const override { return sb_.id; }
    [[nodiscard]] CloudHostId host() const override { return d_.options_.host_id; }

    Value global_get(const std::string& name) override { return wire::unwrap(link().call(wire::GlobalGet{name})); }

    void global_set(const std::string& name, Value value) override {
        wire::unwrap(link().call(wire::GlobalSet{name, std::move(value)}));
    }

    void emit(const std::string& type, Map properties) override {
        if (!type.starts_with(event_type::CustomPrefix) || type.size() == event_type::CustomPrefix.size()) {
            throw Error(ErrorCode::ApplicationError, "custom event types must start with 'custom.': " + type);
        }
        d_.emit_on(ch_, MonitoringEvent{type, 0, EventSource::object(sb_.id), std::move(properties)});
    }

    artifacts::Payload fetch_artifact(const artifacts::Digest& digest) override {
        auto p = d_.cache_->fetch(digest);
        sb_.artifact_view.insert(digest);
        return p;
    }

    void work(std::int64_t ms) override {
        if (ms <= 0) return;
        work_ms_ += ms;
        if (d_.options_.simulated) return;
        auto until = Steady::now() + std::chrono::milliseconds(ms);
        while (Steady::now() < until) {
        }
    }

    [[nodiscard]] std::int64_t work_ms() const { return work_ms_; }

  private:
    wire::Channel& link() {
        auto cb = d_.callback();
        if (!cb) {
            throw Error(ErrorCode::ConnectionClosed, "host has no manager link");
        }
        held_ = cb;
        return *cb;
    }

    HostDaemon& d_;
    Sandbox& sb_;
    std::shared_ptr<wire::Channel> ch_;
    std::shared_ptr<wire::Channel> held_;
    std::int64_t work_ms_ = 0;
};

// ---------------------------------------------------------------------------

HostDaemon::HostDaemon(const ClassRegistry& registry, HostOptions options)
    : registry_(registry), options_(std::move(options)), digest_(registry.digest()),
      origin_(std::make_unique<CallbackOrigin>(*this)),
      cache_(std::make_unique<artifacts::ArtifactCache>(*origin_, options_.cache_budget)),
      gate_(std::make_shared<wire::HandlerGate>()) {}

HostDaemon::~HostDaemon() { shutdown(); }

std::shared_ptr<wire::Channel> HostDaemon::callback() const {
    std::lock_guard lock(mu_);
    return callback_;
}

void HostDaemon::start() {
    if (registry_.empty()) {
        throw Error(ErrorCode::InvalidConfig, "host started with an empty class registry");
    }
    listener_ = wire::Listener::bind(options_.listen);
    port_ = listener_.port();

    if (options_.callback) {
        auto gate = gate_;
        auto ch = wire::Channel::start(
            wire::Socket::connect(*options_.callback),
            [](const std::shared_ptr<wire::Channel>& c, wire::DecodedFrame f) {
                if (f.request_id != 0) {
                    safe_reply(c, f.request_id, err(ErrorCode::MalformedFrame, "callback link is one-way"));
                }
            },
            [gate, this] {
                if (auto pass = gate->enter()) orphaned_ = true;
            });
        wire::unwrap(ch->call(wire::Hello{wire::kProtocolVersion, digest_.bytes()}, std::chrono::seconds(10)));
        std::lock_guard lock(mu_);
        callback_ = ch;
    }

    running_ = true;
    acceptor_ = std::thread(&HostDaemon::accept_loop, this);
    emit_lifecycle(event_type::HostOnline);
}

void HostDaemon::shutdown() {
    if (!running_.exchange(false)) {
        return;
    }
    listener_.shutdown();
    if (acceptor_.joinable()) acceptor_.join();

    std::vector<std::shared_ptr<wire::Channel>> conns;
    {
        std::lock_guard lock(mu_);
        for (auto& w : connections_) {
            if (auto c = w.lock()) conns.push_back(std::move(c));
        }
        connections_.clear();
    }
    for (auto& c : conns) c->close();
    gate_->close();
    {
        std::unique_lock lock(lanes_mu_);
        lanes_cv_.wait(lock, [&] { return active_lanes_ == 0; });
    }
    emit_lifecycle(event_type::HostOffline);
    std::shared_ptr<wire::Channel> cb;
    {
        std::lock_guard lock(mu_);
        cb.swap(callback_);
        sandboxes_.clear();
        greeted_.clear();
    }
    if (cb) cb->close();
}

std::size_t HostDaemon::resident_count() const {
    std::lock_guard lock(mu_);
    return sandboxes_.size();
}

void HostDaemon::accept_loop() {
    while (running_) {
        auto sock = listener_.accept();
        if (!sock.valid()) {
            break;
        }
        auto gate = gate_;
        auto ch = wire::Channel::start(std::move(sock),
                                       [gate, this](const std::shared_ptr<wire::Channel>& c, wire::DecodedFrame f) {
                                           if (auto pass = gate->enter()) on_frame(c, std::move(f));
                                       });
        std::lock_guard lock(mu_);
        std::erase_if(connections_, [](auto& w) { return w.expired(); });
        connections_.push_back(ch);
    }
}

std::shared_ptr<HostDaemon::Sandbox> HostDaemon::find(const CloudObjectId& id) const {
    std::lock_guard lock(mu_);
    auto it = sandboxes_.find(id);
    if (it == sandboxes_.end()) {
        throw Error(ErrorCode::UnknownCO, id.hex());
    }
    return it->second;
}

void HostDaemon::emit_on(const std::shared_ptr<wire::Channel>& ch, MonitoringEvent e) {
    if (options_.on_event) {
        options_.on_event(e);
    }
    if (ch && ch->is_open()) {
        try {
            ch->notify(wire::EventPush{std::move(e)});
        } catch (const Error&) {
        }
    }
}

void HostDaemon::emit_lifecycle(std::string_view type) {
    MonitoringEvent e{std::string(type), 0, EventSource::host(options_.host_id),
                      {{"host_id", Value::text(options_.host_id.hex())}}};
    if (options_.on_event) {
        options_.on_event(e);
    }
    if (auto cb = callback(); options_.announce_lifecycle && cb && cb->is_open()) {
        try {
            cb->notify(wire::EventPush{std::move(e)});
        } catch (const Error&) {
        }
    }
}

void HostDaemon::post(const std::shared_ptr<Sandbox>& sb, std::shared_ptr<wire::Channel> ch, std::uint64_t rid,
                      std::function<wire::Message()> task) {
    std::lock_guard lock(sb->lane_mu);
    sb->queue.push_back({std::move(ch), rid, std::move(task)});
    if (sb->busy) {
        return;
    }
    sb->busy = true;
    {
        std::lock_guard l(lanes_mu_);
        ++active_lanes_;
    }
    std::thread(&HostDaemon::drain, this, sb).detach();
}

// The lane is released before the final reply goes out, so a request sent
// after that reply never observes the lane as busy.
void HostDaemon::drain(std::shared_ptr<Sandbox> sb) {
    while (true) {
        LaneTask task;
        {
            std::lock_guard lock(sb->lane_mu);
            task = std::move(sb->queue.front());
            sb->queue.pop_front();
        }
        wire::Message reply = task.run();
        bool last = false;
        {
            std::lock_guard lock(sb->lane_mu);
            if (sb->queue.empty()) {
                sb->busy = false;
                last = true;
            }
        }
        safe_reply(task.ch, task.rid, std::move(reply));
        if (last) {
            break;
        }
    }
    std::lock_guard l(lanes_mu_);
    if (--active_lanes_ == 0) {
        lanes_cv_.notify_all();
    }
}

void HostDaemon::on_frame(const std::shared_ptr<wire::Channel>& ch, wire::DecodedFrame frame) {
    auto rid = frame.request_id;
    try {
        handle(ch, rid, std::move(frame.message));
    } catch (const Error& e) {
        safe_reply(ch, rid, wire::Err::from(e));
    }
}

void HostDaemon::handle(const std::shared_ptr<wire::Channel>& ch, std::uint64_t rid, wire::Message msg) {
    if (auto const* hello = std::get_if<wire::Hello>(&msg)) {
        if (hello->version != wire::kProtocolVersion || hello->registry_digest != digest_.bytes()) {
            safe_reply(ch, rid,
                       err(ErrorCode::RegistryMismatch, hello->version != wire::kProtocolVersion
                                                            ? "protocol version " + std::to_string(hello->version)
                                                            : "class registry digest differs"));
            ch->close();
            return;
        }
        {
            std::lock_guard lock(mu_);
            greeted_.insert(ch.get());
        }
        safe_reply(ch, rid, wire::Ok{});
        return;
    }
    if (rid == 0) {
        return;// stray notification
    }
    {
        std::lock_guard lock(mu_);
        if (!greeted_.contains(ch.get())) {
            safe_reply(ch, rid, err(ErrorCode::RegistryMismatch, "handshake required"));
            return;
        }
    }

    std::visit(
        [&](auto& m) {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, wire::DeployCO>) {
                auto const& spec = registry_.get(m.class_name);
                check_args(m.class_name + " constructor", spec.ctor_params, m.ctor_args);
                auto sb = std::make_shared<Sandbox>();
                sb->id = m.co_id;
                sb->spec = &spec;
                {
                    std::lock_guard lock(mu_);
                    if (!sandboxes_.emplace(m.co_id, sb).second) {
                        throw Error(ErrorCode::DuplicateCO, m.co_id.hex());
                    }
                }
                post(sb, ch, rid, [this, ch, sb, args = std::move(m.ctor_args)]() -> wire::Message {
                    Context ctx(*this, *sb, ch);
                    auto t0 = Steady::now();
                    Instance inst;
                    try {
                        inst = sb->spec->factory(ctx, args);
                    } catch (const std::exception& e) {
                        {
                            std::lock_guard lock(sb->lane_mu);
                            sb->alive = false;
                        }
                        {
                            std::lock_guard lock(mu_);
                            if (auto it = sandboxes_.find(sb->id); it != sandboxes_.end() && it->second == sb) {
                                sandboxes_.erase(it);
                            }
                        }
                        return err(ErrorCode::ConstructorFailed, e.what());
                    }
                    auto duration = options_.simulated ? ctx.work_ms() : elapsed_ms(t0);
                    sb->instance = std::move(inst);
                    emit_on(ch, MonitoringEvent{std::string(event_type::ObjectDeployed),
                                                0,
                                                EventSource::host(options_.host_id),
                                                {{"class", Value::text(sb->spec->name)},
                                                 {"co_id", Value::text(sb->id.hex())},
                                                 {"duration", Value::int64(duration)},
                                                 {"host_id", Value::text(options_.host_id.hex())}}});
                    return wire::Ok{};
                });
            } else if constexpr (std::is_same_v<M, wire::InvokeCO>) {
                auto sb = find(m.co_id);
                auto it = sb->spec->methods.find(m.method);
                if (it == sb->spec->methods.end()) {
                    throw Error(ErrorCode::UnknownMethod, sb->spec->name + "." + m.method);
                }
                check_args(sb->spec->name + "." + m.method, it->second.params, m.args);
                post(sb, ch, rid, [this, ch, sb, method = m.method, spec = &it->second, args = std::move(m.args)]() -> wire::Message {
                    {
                        std::lock_guard lock(sb->lane_mu);
                        if (!sb->alive) {
                            return err(ErrorCode::UnknownCO, sb->id.hex());
                        }
                    }
                    Map ids{{"co_id", Value::text(sb->id.hex())},
                            {"host_id", Value::text(options_.host_id.hex())},
                            {"method", Value::text(method)}};
                    emit_on(ch, MonitoringEvent{std::string(event_type::ExecutionStarted), 0,
                                                EventSource::object(sb->id), ids});
                    Context ctx(*this, *sb, ch);
                    auto t0 = Steady::now();
                    std::optional<Value> result;
                    std::string failure;
                    try {
                        result = spec->fn(sb->instance.get(), ctx, args);
                        if (!conforms_to(*result, spec->result)) {
                            result.reset();
                            failure = "result violates its declared passing mode";
                        }
                    } catch (const Error& e) {
                        failure = std::string(to_string(e.code())) + ": " + e.detail();
                    } catch (const std::exception& e) {
                        failure = e.what();
                    }
                    if (!result) {
                        ids.emplace("error", Value::text(failure));
                        emit_on(ch, MonitoringEvent{std::string(event_type::ExecutionFailed), 0,
                                                    EventSource::object(sb->id), std::move(ids)});
                        return err(ErrorCode::ApplicationError, failure);
                    }
                    auto duration = options_.simulated ? ctx.work_ms() : elapsed_ms(t0);
                    ids.emplace("duration", Value::int64(duration));
                    emit_on(ch, MonitoringEvent{std::string(event_type::ExecutionFinished), 0,
                                                EventSource::object(sb->id), std::move(ids)});
                    return wire::Ok{std::move(*result)};
                });
            } else if constexpr (std::is_same_v<M, wire::GetField> || std::is_same_v<M, wire::SetField>) {
                auto sb = find(m.co_id);
                auto it = sb->spec->fields.find(m.field);
                if (it == sb->spec->fields.end()) {
                    throw Error(ErrorCode::UnknownField, sb->spec->name + "." + m.field);
                }
                auto const* field = &it->second;
                Value value;
                if constexpr (std::is_same_v<M, wire::SetField>) {
                    if (!conforms_to(m.value, field->mode)) {
                        throw Error(ErrorCode::ArityMismatch, m.field + " is " + std::string(to_string(field->mode)));
                    }
                    value = std::move(m.value);
                }
                constexpr bool is_set = std::is_same_v<M, wire::SetField>;
                post(sb, ch, rid, [sb, field, value = std::move(value)]() mutable -> wire::Message {
                    {
                        std::lock_guard lock(sb->lane_mu);
                        if (!sb->alive) {
                            return err(ErrorCode::UnknownCO, sb->id.hex());
                        }
                    }
                    try {
                        if constexpr (is_set) {
                            field->set(sb->instance.get(), std::move(value));
                            return wire::Ok{};
                        } else {
                            return wire::Ok{field->get(sb->instance.get())};
                        }
                    } catch (const std::exception& e) {
                        return err(ErrorCode::ApplicationError, e.what());
                    }
                });
            } else if constexpr (std::is_same_v<M, wire::DestroyCO>) {
                auto sb = find(m.co_id);
                post(sb, ch, rid, [this, sb]() -> wire::Message {
                    {
                        std::lock_guard lock(sb->lane_mu);
                        if (!sb->alive) {
                            return err(ErrorCode::UnknownCO, sb->id.hex());
                        }
                        sb->alive = false;
                    }
                    {
                        std::lock_guard lock(mu_);
                        if (auto it = sandboxes_.find(sb->id); it != sandboxes_.end() && it->second == sb) {
                            sandboxes_.erase(it);
                        }
                    }
                    sb->instance.reset();
                    return wire::Ok{};
                });
            } else if constexpr (std::is_same_v<M, wire::SnapshotCO>) {
                auto sb = find(m.co_id);
                if (!sb->spec->snapshottable()) {
                    throw Error(ErrorCode::SnapshotUnsupported, sb->spec->name);
                }
                Bytes state;
                {
                    std::lock_guard lock(sb->lane_mu);
                    if (sb->busy || !sb->queue.empty()) {
                        throw Error(ErrorCode::NotQuiescent, sb->id.hex());
                    }
                    if (!sb->alive) {
                        throw Error(ErrorCode::UnknownCO, sb->id.hex());
                    }
                    state = sb->spec->snapshot(sb->instance.get());
                }
                safe_reply(ch, rid, wire::Ok{Value::bytes(std::move(state))});
            } else if constexpr (std::is_same_v<M, wire::RestoreCO>) {
                auto const& spec = registry_.get(m.class_name);
                if (!spec.snapshottable()) {
                    throw Error(ErrorCode::SnapshotUnsupported, spec.name);
                }
                auto sb = std::make_shared<Sandbox>();
                sb->id = m.co_id;
                sb->spec = &spec;
                std::lock_guard lock(mu_);
                if (sandboxes_.contains(m.co_id)) {
                    throw Error(ErrorCode::DuplicateCO, m.co_id.hex());
                }
                try {
                    sb->instance = spec.restore(m.state);
                } catch (const std::exception& e) {
                    throw Error(ErrorCode::ConstructorFailed, std::string("restore: ") + e.what());
                }
                sandboxes_.emplace(m.co_id, sb);
                safe_reply(ch, rid, wire::Ok{});
            } else if constexpr (std::is_same_v<M, wire::EventPush>) {
                // hosts do not consume events
            } else {
                throw Error(ErrorCode::MalformedFrame,
                            "host does not serve " + std::string(wire::to_string(wire::type_of(msg))));
            }
        },
        msg);
}

}// namespace elastikit::hostd
