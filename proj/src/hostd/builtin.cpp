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

#include <elastikit/hostd/builtin.hpp>

#include <charconv>
#include <chrono>
#include <stdexcept>
#include <thread>

namespace elastikit::builtin {

using hostd::ClassBuilder;
using hostd::InvocationContext;
using PM = PassingMode;

std::uint64_t fib(std::uint32_t n) { return n < 2 ? n : fib(n - 1) + fib(n - 2); }

Value Register::put(const std::string& key, Value v) {
    auto it = entries.find(key);
    Value previous = it == entries.end() ? Value::null() : it->second;
    entries[key] = std::move(v);
    return previous;
}

Value Register::get(const std::string& key) const {
    auto it = entries.find(key);
    return it == entries.end() ? Value::null() : it->second;
}

bool Register::remove(const std::string& key) { return entries.erase(key) > 0; }

List Register::keys() const {
    List out;
    for (auto const& [k, v] : entries) out.push_back(Value::text(k));
    return out;
}

double Accumulator::add(double x) {
    samples.push_back(x * scale);
    sum += x * scale;
    return sum;
}

Value Accumulator::mean() const {
    if (samples.empty()) return Value::null();
    return Value::float64(sum / static_cast<double>(samples.size()));
}

List Accumulator::history() const {
    List out;
    for (double x : samples) out.push_back(Value::float64(x));
    return out;
}

std::int64_t Faulty::divide(std::int64_t a, std::int64_t b) {
    ++calls;
    if (b == 0) throw std::domain_error("division by zero");
    return a / b;
}

void Faulty::fail(const std::string& message) {
    ++calls;
    throw std::runtime_error(message);
}

std::int64_t TestMaster::add_worker(CloudObjectId worker) {
    workers.push_back(worker);
    return static_cast<std::int64_t>(workers.size());
}

List TestMaster::plan(std::int64_t tasks) const {
    if (workers.empty()) throw std::logic_error("no workers registered");
    if (tasks < 1) throw std::invalid_argument("a suite needs at least one task");
    std::vector<List> shares(workers.size());
    for (std::int64_t t = 0; t < tasks; ++t) {
        shares[static_cast<std::size_t>(t) % workers.size()].push_back(Value::int64(t));
    }
    List out;
    for (auto& s : shares) out.push_back(Value::list(std::move(s)));
    return out;
}

std::optional<std::uint32_t> parse_suite_script(std::string_view script) {
    while (!script.empty() && (script.back() == '\n' || script.back() == ' ')) script.remove_suffix(1);
    if (!script.starts_with("fib ")) return std::nullopt;
    script.remove_prefix(4);
    std::uint32_t n = 0;
    auto [p, ec] = std::from_chars(script.data(), script.data() + script.size(), n);
    if (ec != std::errc{} || p != script.data() + script.size() || n < 1 || n > 40) return std::nullopt;
    return n;
}

std::string make_suite_script(std::uint32_t n) { return "fib " + std::to_string(n) + "\n"; }

namespace {

template <typename T>
std::unique_ptr<T> make(InvocationContext&, const List&) {
    return std::make_unique<T>();
}

Value int_field(std::int64_t v) { return Value::int64(v); }

}// namespace

void register_builtin_classes(hostd::ClassRegistry& registry) {
    ClassBuilder<Counter>("Counter")
        .constructor({}, make<Counter>)
        .method("add", {PM::ByValue}, [](Counter& c, auto&, const List& a) { return Value::int64(c.add(a[0].as_int64())); })
        .method("tick", {}, [](Counter& c, auto&, const List&) { return Value::int64(c.tick()); })
        .method("get", {}, [](Counter& c, auto&, const List&) { return Value::int64(c.get()); })
        .field("value", [](const Counter& c) { return int_field(c.value); },
               [](Counter& c, Value v) { c.value = v.as_int64(); })
        .field("step", [](const Counter& c) { return int_field(c.step); },
               [](Counter& c, Value v) { c.step = v.as_int64(); })
        .snapshot_via_value(
            [](const Counter& c) { return Value::map({{"step", Value::int64(c.step)}, {"value", Value::int64(c.value)}}); },
            [](const Value& v) {
                auto c = std::make_unique<Counter>();
                c->value = v.as_map().at("value").as_int64();
                c->step = v.as_map().at("step").as_int64();
                return c;
            })
        .register_in(registry);

    ClassBuilder<Register>("Register")
        .constructor({}, make<Register>)
        .method("put", {PM::ByValue, PM::ByValue},
                [](Register& r, auto&, const List& a) { return r.put(a[0].as_text(), a[1]); })
        .method("get", {PM::ByValue}, [](Register& r, auto&, const List& a) { return r.get(a[0].as_text()); })
        .method("remove", {PM::ByValue},
                [](Register& r, auto&, const List& a) { return Value::boolean(r.remove(a[0].as_text())); })
        .method("size", {}, [](Register& r, auto&, const List&) { return Value::int64(r.size()); })
        .method("keys", {}, [](Register& r, auto&, const List&) { return Value::list(r.keys()); })
        .field("label", [](const Register& r) { return Value::text(r.label); },
               [](Register& r, Value v) { r.label = v.as_text(); })
        .field("entries", [](const Register& r) { return Value::map(r.entries); },
               [](Register& r, Value v) { r.entries = v.as_map(); })
        .snapshot_via_value(
            [](const Register& r) {
                return Value::map({{"entries", Value::map(r.entries)}, {"label", Value::text(r.label)}});
            },
            [](const Value& v) {
                auto r = std::make_unique<Register>();
                r->label = v.as_map().at("label").as_text();
                r->entries = v.as_map().at("entries").as_map();
                return r;
            })
        .register_in(registry);

    ClassBuilder<Accumulator>("Accumulator")
        .constructor({}, make<Accumulator>)
        .method("add", {PM::ByValue},
                [](Accumulator& s, auto&, const List& a) { return Value::float64(s.add(a[0].as_number())); })
        .method("mean", {}, [](Accumulator& s, auto&, const List&) { return s.mean(); })
        .method("history", {}, [](Accumulator& s, auto&, const List&) { return Value::list(s.history()); })
        .field("scale", [](const Accumulator& s) { return Value::float64(s.scale); },
               [](Accumulator& s, Value v) { s.scale = v.as_number(); })
        .snapshot_via_value(
            [](const Accumulator& s) {
                return Value::map({{"samples", Value::list(s.history())},
                                   {"scale", Value::float64(s.scale)},
                                   {"sum", Value::float64(s.sum)}});
            },
            [](const Value& v) {
                auto s = std::make_unique<Accumulator>();
                auto const& m = v.as_map();
                s->scale = m.at("scale").as_float64();
                s->sum = m.at("sum").as_float64();
                for (auto const& x : m.at("samples").as_list()) s->samples.push_back(x.as_float64());
                return s;
            })
        .register_in(registry);

    ClassBuilder<Faulty>("Faulty")
        .constructor({}, make<Faulty>)
        .method("divide", {PM::ByValue, PM::ByValue},
                [](Faulty& f, auto&, const List& a) { return Value::int64(f.divide(a[0].as_int64(), a[1].as_int64())); })
        .method("fail", {PM::ByValue},
                [](Faulty& f, auto&, const List& a) -> Value { f.fail(a[0].as_text()); })
        .field("calls", [](const Faulty& f) { return Value::int64(f.calls); },
               [](Faulty& f, Value v) { f.calls = v.as_int64(); })
        .register_in(registry);

    ClassBuilder<Load>("Load")
        .constructor({}, make<Load>)
        .method("busy", {PM::ByValue},
                [](Load& l, InvocationContext& ctx, const List& a) {
                    ctx.work(a[0].as_int64());
                    l.total_ms += a[0].as_int64();
                    return Value::int64(l.total_ms);
                })
        .method("hold", {PM::ByValue},
                [](Load& l, auto&, const List& a) {
                    std::this_thread::sleep_for(std::chrono::milliseconds(a[0].as_int64()));
                    return Value::int64(l.total_ms);
                })
        .method("emit", {PM::ByValue, PM::ByValue},
                [](Load&, InvocationContext& ctx, const List& a) {
                    ctx.emit(a[0].as_text(), a[1].as_map());
                    return Value::null();
                })
        .method("fetch", {PM::ByValue},
                [](Load&, InvocationContext& ctx, const List& a) {
                    auto d = artifacts::Digest::from_hex(a[0].as_text());
                    if (!d) throw std::invalid_argument("bad digest");
                    return Value::bytes(*ctx.fetch_artifact(*d));
                })
        .field("total_ms", [](const Load& l) { return Value::int64(l.total_ms); },
               [](Load& l, Value v) { l.total_ms = v.as_int64(); })
        .snapshot_via_value([](const Load& l) { return Value::int64(l.total_ms); },
                            [](const Value& v) {
                                auto l = std::make_unique<Load>();
                                l->total_ms = v.as_int64();
                                return l;
                            })
        .register_in(registry);

    ClassBuilder<GlobalCounter>("GlobalCounter")
        .constructor({}, make<GlobalCounter>)
        .method("increment", {PM::ByValue},
                [](GlobalCounter&, InvocationContext& ctx, const List& a) {
                    auto const& name = a[0].as_text();
                    auto cur = ctx.global_get(name);
                    auto next = Value::int64((cur.is_null() ? 0 : cur.as_int64()) + 1);
                    ctx.global_set(name, next);
                    return next;
                })
        .method("read", {PM::ByValue},
                [](GlobalCounter&, InvocationContext& ctx, const List& a) { return ctx.global_get(a[0].as_text()); })
        .method("write", {PM::ByValue, PM::ByValue},
                [](GlobalCounter&, InvocationContext& ctx, const List& a) {
                    ctx.global_set(a[0].as_text(), a[1]);
                    return Value::null();
                })
        .snapshot_via_value([](const GlobalCounter&) { return Value::null(); },
                            [](const Value&) { return std::make_unique<GlobalCounter>(); })
        .register_in(registry);

    ClassBuilder<TestMaster>("TestMaster")
        .constructor({}, make<TestMaster>)
        .method("add_worker", {PM::ByReference},
                [](TestMaster& m, auto&, const List& a) { return Value::int64(m.add_worker(a[0].as_ref())); })
        .method("workers", {},
                [](TestMaster& m, auto&, const List&) { return Value::int64(static_cast<std::int64_t>(m.workers.size())); })
        .method(
            "worker", {PM::ByValue},
            [](TestMaster& m, auto&, const List& a) {
                auto i = a[0].as_int64();
                if (i < 0 || static_cast<std::size_t>(i) >= m.workers.size()) throw std::out_of_range("no such worker");
                return Value::ref(m.workers[static_cast<std::size_t>(i)]);
            },
            PM::ByReference)
        .method("plan", {PM::ByValue}, [](TestMaster& m, auto&, const List& a) { return Value::list(m.plan(a[0].as_int64())); })
        .method("record", {PM::ByValue, PM::ByValue, PM::ByValue},
                [](TestMaster&, InvocationContext& ctx, const List& a) {
                    ctx.emit("custom.billing", {{"suite", a[0]}, {"tasks", a[1]}, {"total_ms", a[2]}});
                    return Value::null();
                })
        .snapshot_via_value(
            [](const TestMaster& m) {
                List l;
                for (auto const& w : m.workers) l.push_back(Value::ref(w));
                return Value::list(std::move(l));
            },
            [](const Value& v) {
                auto m = std::make_unique<TestMaster>();
                for (auto const& w : v.as_list()) m->workers.push_back(w.as_ref());
                return m;
            })
        .register_in(registry);

    ClassBuilder<TestWorker>("TestWorker")
        .constructor({}, make<TestWorker>)
        .method("run", {PM::ByValue, PM::ByValue},
                [](TestWorker& w, InvocationContext& ctx, const List& a) {
                    auto digest = artifacts::Digest::from_hex(a[0].as_text());
                    if (!digest) throw std::invalid_argument("bad suite digest");
                    auto script = ctx.fetch_artifact(*digest);
                    auto n = parse_suite_script(std::string_view(reinterpret_cast<const char*>(script->data()), script->size()));
                    if (!n) throw std::invalid_argument("unrecognized suite script");
                    List results;
                    for (auto const& task : a[1].as_list()) {
                        auto t0 = std::chrono::steady_clock::now();
                        auto value = fib(*n);
                        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
                        results.push_back(Value::map({{"duration_ms", Value::int64(ms.count())},
                                                      {"task", task},
                                                      {"value", Value::int64(static_cast<std::int64_t>(value))}}));
                        ++w.completed;
                    }
                    return Value::list(std::move(results));
                })
        .field("completed", [](const TestWorker& w) { return Value::int64(w.completed); },
               [](TestWorker& w, Value v) { w.completed = v.as_int64(); })
        .snapshot_via_value([](const TestWorker& w) { return Value::int64(w.completed); },
                            [](const Value& v) {
                                auto w = std::make_unique<TestWorker>();
                                w->completed = v.as_int64();
                                return w;
                            })
        .register_in(registry);
}

const hostd::ClassRegistry& builtin_registry() {
    static const hostd::ClassRegistry registry = [] {
        hostd::ClassRegistry r;
        register_builtin_classes(r);
        return r;
    }();
    return registry;
}

}// namespace elastikit::builtin
