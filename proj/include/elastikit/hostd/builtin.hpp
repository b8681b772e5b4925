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

#ifndef ELASTIKIT_HOSTD_BUILTIN_HPP
#define ELASTIKIT_HOSTD_BUILTIN_HPP

#include <elastikit/hostd/class_registry.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

/// Classes every elastikit host knows: small stateful fixtures and the
/// test-as-a-service demo (TestMaster, TestWorker). The plain C++ types are
/// usable directly, which is how tests build local reference runs.
namespace elastikit::builtin {

/// Naive recursive Fibonacci; fib(0) = 0, fib(1) = 1.
std::uint64_t fib(std::uint32_t n);

class Counter {
  public:
    std::int64_t add(std::int64_t delta) { return value += delta; }
    std::int64_t tick() { return value += step; }
    [[nodiscard]] std::int64_t get() const { return value; }

    std::int64_t value = 0;
    std::int64_t step = 1;
};

class Register {
  public:
    Value put(const std::string& key, Value v);
    [[nodiscard]] Value get(const std::string& key) const;
    bool remove(const std::string& key);
    [[nodiscard]] std::int64_t size() const { return static_cast<std::int64_t>(entries.size()); }
    [[nodiscard]] List keys() const;

    std::string label;
    Map entries;
};

class Accumulator {
  public:
    double add(double x);
    /// Null when nothing was added.
    [[nodiscard]] Value mean() const;
    [[nodiscard]] List history() const;

    double scale = 1.0;
    double sum = 0.0;
    std::vector<double> samples;
};

/// Throws on purpose; registered without snapshot support.
class Faulty {
  public:
    std::int64_t divide(std::int64_t a, std::int64_t b);
    [[noreturn]] void fail(const std::string& message);

    std::int64_t calls = 0;
};

/// Consumes execution time: busy() through the invocation context (virtual
/// on simulated hosts), hold() by sleeping on the wall clock.
class Load {
  public:
    std::int64_t total_ms = 0;
};

/// Increments a manager-held global without any atomicity.
class GlobalCounter {};

/// The demo's master: keeps the worker set and splits suites into even
/// shares.
class TestMaster {
  public:
    std::int64_t add_worker(CloudObjectId worker);
    /// Task i goes to worker i mod w, so share sizes differ by at most one.
    [[nodiscard]] List plan(std::int64_t tasks) const;

    std::vector<CloudObjectId> workers;
};

/// The demo's worker: fetches a suite script by digest and runs its tasks.
class TestWorker {
  public:
    std::int64_t completed = 0;
};

/// Suite scripts are plain text: "fib <n>".
std::optional<std::uint32_t> parse_suite_script(std::string_view script);
std::string make_suite_script(std::uint32_t n);

void register_builtin_classes(hostd::ClassRegistry& registry);

/// Shared, immutable registry with every built-in class.
const hostd::ClassRegistry& builtin_registry();

}// namespace elastikit::builtin

#endif// ELASTIKIT_HOSTD_BUILTIN_HPP
