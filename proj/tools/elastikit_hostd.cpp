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

// elastikit-hostd: one cloud host. Serves the built-in class registry until
// SIGTERM/SIGINT or until the manager link drops.

#include <elastikit/core/error.hpp>
#include <elastikit/hostd/builtin.hpp>
#include <elastikit/hostd/host_daemon.hpp>

#include <CLI11.hpp>

#include <csignal>
#include <ctime>
#include <iostream>

int main(int argc, char** argv) {
    using namespace elastikit;

    CLI::App app{"elastikit cloud host daemon"};
    std::string listen = "127.0.0.1:0";
    std::string callback;
    std::string host_id;
    std::size_t cache_mb = artifacts::kDefaultCacheBudget >> 20;
    app.add_option("--listen", listen, "host:port to serve on")->capture_default_str();
    app.add_option("--callback", callback, "manager callback endpoint host:port");
    app.add_option("--host-id", host_id, "32 hex digits assigned by the backend");
    app.add_option("--cache-mb", cache_mb, "artifact cache budget in MiB")->capture_default_str();
    CLI11_PARSE(app, argc, argv);

    // Block the stop signals before any thread starts so only sigtimedwait sees them.
    sigset_t stop_signals;
    sigemptyset(&stop_signals);
    sigaddset(&stop_signals, SIGTERM);
    sigaddset(&stop_signals, SIGINT);
    pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

    try {
        hostd::HostOptions opts;
        opts.listen = wire::Endpoint::parse(listen);
        if (!callback.empty()) opts.callback = wire::Endpoint::parse(callback);
        if (!host_id.empty()) {
            auto id = CloudHostId::from_hex(host_id);
            if (!id) throw Error(ErrorCode::InvalidConfig, "bad --host-id");
            opts.host_id = *id;
        } else {
            opts.host_id = IdGenerator{}.next<CloudHostId>();
        }
        opts.cache_budget = cache_mb << 20;

        hostd::HostDaemon daemon(builtin::builtin_registry(), opts);
        daemon.start();
        std::cout << "listening " << daemon.endpoint().to_string() << " host " << daemon.id().hex() << std::endl;

        timespec poll{0, 200'000'000};
        while (!daemon.orphaned()) {
            int sig = sigtimedwait(&stop_signals, nullptr, &poll);
            if (sig == SIGTERM || sig == SIGINT) break;
        }
        daemon.shutdown();
    } catch (const Error& e) {
        std::cerr << "elastikit-hostd: " << e.what() << std::endl;
        return e.code() == ErrorCode::BindFailure ? 3 : 1;
    }
    return 0;
}
