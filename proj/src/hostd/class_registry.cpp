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

#include <elastikit/hostd/class_registry.hpp>

namespace elastikit::hostd {

void check_args(const std::string& what, const std::vector<PassingMode>& params, const List& args) {
    if (args.size() != params.size()) {
        throw Error(ErrorCode::ArityMismatch, what + " takes " + std::to_string(params.size()) + " argument(s), got " +
                                                  std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!conforms_to(args[i], params[i])) {
            throw Error(ErrorCode::ArityMismatch, what + " argument " + std::to_string(i) + " is not " +
                                                      std::string(to_string(params[i])));
        }
    }
}

void ClassRegistry::add(ClassSpec spec) {
    if (spec.name.empty()) {
        throw Error(ErrorCode::InvalidConfig, "class name must not be empty");
    }
    if (!spec.factory) {
        throw Error(ErrorCode::InvalidConfig, "class '" + spec.name + "' has no constructor");
    }
    if (classes_.contains(spec.name)) {
        throw Error(ErrorCode::InvalidConfig, "class '" + spec.name + "' registered twice");
    }
    auto name = spec.name;
    classes_.emplace(std::move(name), std::move(spec));
}

const ClassSpec& ClassRegistry::get(const std::string& name) const {
    auto it = classes_.find(name);
    if (it == classes_.end()) {
        throw Error(ErrorCode::UnknownClass, name);
    }
    return it->second;
}

std::vector<std::string> ClassRegistry::names() const {
    std::vector<std::string> out;
    for (auto const& [name, spec] : classes_) out.push_back(name);
    return out;
}

namespace {

Value modes(const std::vector<PassingMode>& ms) {
    List l;
    for (auto m : ms) l.push_back(Value::int64(static_cast<std::int64_t>(m)));
    return Value::list(std::move(l));
}

}// namespace

Value ClassRegistry::describe() const {
    Map classes;
    for (auto const& [name, spec] : classes_) {
        Map methods;
        for (auto const& [mname, m] : spec.methods) {
            methods.emplace(mname, Value::map({{"params", modes(m.params)},
                                               {"result", Value::int64(static_cast<std::int64_t>(m.result))}}));
        }
        Map fields;
        for (auto const& [fname, f] : spec.fields) {
            fields.emplace(fname, Value::int64(static_cast<std::int64_t>(f.mode)));
        }
        classes.emplace(name, Value::map({{"ctor", modes(spec.ctor_params)},
                                          {"fields", Value::map(std::move(fields))},
                                          {"methods", Value::map(std::move(methods))},
                                          {"snapshot", Value::boolean(spec.snapshottable())}}));
    }
    return Value::map(std::move(classes));
}

artifacts::Digest ClassRegistry::digest() const { return artifacts::Digest::of(encode_value(describe())); }

}// namespace elastikit::hostd
