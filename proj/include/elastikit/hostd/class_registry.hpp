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

#ifndef ELASTIKIT_HOSTD_CLASS_REGISTRY_HPP
#define ELASTIKIT_HOSTD_CLASS_REGISTRY_HPP

#include <elastikit/artifacts/digest.hpp>
#include <elastikit/core/codec.hpp>
#include <elastikit/core/error.hpp>
#include <elastikit/core/types.hpp>
#include <elastikit/core/value.hpp>
#include <elastikit/hostd/context.hpp>

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace elastikit::hostd {

/// Type-erased application instance.
using Instance = std::shared_ptr<void>;

struct MethodSpec {
    std::vector<PassingMode> params;
    PassingMode result = PassingMode::ByValue;
    std::function<Value(void* self, InvocationContext& ctx, const List& args)> fn;
};

struct FieldSpec {
    PassingMode mode = PassingMode::ByValue;
    std::function<Value(const void* self)> get;
    std::function<void(void* self, Value v)> set;
};

struct ClassSpec {
    std::string name;
    std::vector<PassingMode> ctor_params;
    std::function<Instance(InvocationContext& ctx, const List& args)> factory;
    std::map<std::string, MethodSpec> methods;
    std::map<std::string, FieldSpec> fields;
    std::function<Bytes(const void* self)> snapshot;// empty: SnapshotUnsupported
    std::function<Instance(const Bytes& state)> restore;

    [[nodiscard]] bool snapshottable() const { return snapshot && restore; }
};

/// Throws ArityMismatch unless `args` has one value per declared position
/// and each value conforms to its passing mode.
void check_args(const std::string& what, const std::vector<PassingMode>& params, const List& args);

/// The set of classes a host can instantiate. Manager and hosts must hold
/// identical registries; the digest over the canonical description of
/// every class, method, field and passing mode is compared at handshake.
class ClassRegistry {
  public:
    /// Throws InvalidConfig if the name is taken or the spec is incomplete.
    void add(ClassSpec spec);

    /// Throws UnknownClass.
    [[nodiscard]] const ClassSpec& get(const std::string& name) const;
    [[nodiscard]] bool contains(const std::string& name) const { return classes_.contains(name); }
    [[nodiscard]] bool empty() const { return classes_.empty(); }
    [[nodiscard]] std::vector<std::string> names() const;

    [[nodiscard]] Value describe() const;
    [[nodiscard]] artifacts::Digest digest() const;

  private:
    std::map<std::string, ClassSpec> classes_;
};

/// Fluent, typed registration of a class T.
///
///   ClassBuilder<Counter>("Counter")
///       .constructor({}, [](auto&, const List&) { return std::make_unique<Counter>(); })
///       .method("add", {PassingMode::ByValue}, [](Counter& c, auto&, const List& a) { ... })
///       .field("value", &Counter::value)
///       .snapshot_via_value(...)
///       .register_in(registry);
template <typename T>
class ClassBuilder {
  public:
    using Ctor = std::function<std::unique_ptr<T>(InvocationContext&, const List&)>;
    using Method = std::function<Value(T&, InvocationContext&, const List&)>;

    explicit ClassBuilder(std::string name) { spec_.name = std::move(name); }

    ClassBuilder& constructor(std::vector<PassingMode> params, Ctor ctor) {
        spec_.ctor_params = std::move(params);
        spec_.factory = [ctor = std::move(ctor)](InvocationContext& ctx, const List& args) -> Instance {
            return std::shared_ptr<T>(ctor(ctx, args));
        };
        return *this;
    }

    ClassBuilder& method(const std::string& name, std::vector<PassingMode> params, Method fn,
                         PassingMode result = PassingMode::ByValue) {
        spec_.methods[name] = MethodSpec{std::move(params), result,
                                         [fn = std::move(fn)](void* self, InvocationContext& ctx, const List& args) {
                                             return fn(*static_cast<T*>(self), ctx, args);
                                         }};
        return *this;
    }

    /// A field backed by a Value member.
    ClassBuilder& field(const std::string& name, Value T::*member, PassingMode mode = PassingMode::ByValue) {
        spec_.fields[name] = FieldSpec{
            mode, [member](const void* self) { return static_cast<const T*>(self)->*member; },
            [member](void* self, Value v) { static_cast<T*>(self)->*member = std::move(v); }};
        return *this;
    }

    ClassBuilder& field(const std::string& name, std::function<Value(const T&)> get, std::function<void(T&, Value)> set,
                        PassingMode mode = PassingMode::ByValue) {
        spec_.fields[name] =
            FieldSpec{mode, [get = std::move(get)](const void* self) { return get(*static_cast<const T*>(self)); },
                      [set = std::move(set)](void* self, Value v) { set(*static_cast<T*>(self), std::move(v)); }};
        return *this;
    }

    ClassBuilder& snapshot(std::function<Bytes(const T&)> save, std::function<std::unique_ptr<T>(const Bytes&)> load) {
        spec_.snapshot = [save = std::move(save)](const void* self) { return save(*static_cast<const T*>(self)); };
        spec_.restore = [load = std::move(load)](const Bytes& b) -> Instance { return std::shared_ptr<T>(load(b)); };
        return *this;
    }

    /// Snapshot through the value codec: the class maps its state to and
    /// from a Value tree.
    ClassBuilder& snapshot_via_value(std::function<Value(const T&)> to_value,
                                     std::function<std::unique_ptr<T>(const Value&)> from_value) {
        return snapshot([to = std::move(to_value)](const T& t) { return encode_value(to(t)); },
                        [from = std::move(from_value)](const Bytes& b) { return from(decode_value(b)); });
    }

    [[nodiscard]] ClassSpec build() const { return spec_; }
    void register_in(ClassRegistry& registry) const { registry.add(spec_); }

  private:
    ClassSpec spec_;
};

}// namespace elastikit::hostd

#endif// ELASTIKIT_HOSTD_CLASS_REGISTRY_HPP
