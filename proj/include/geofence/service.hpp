// Copyright 2026 The dgeofence Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "geofence/json_io.hpp"

namespace httplib {
class Server;
}

namespace geofence::service {

using json = nlohmann::json;

/// HTTP status for a library error kind.
int http_status(ErrorKind kind);

/// Dataset and run bookkeeping behind the HTTP API. Every method is thread-safe;
/// solves and dataset preparation run on internal worker threads.
class Service {
public:
    explicit Service(std::filesystem::path state_dir, int workers = 2);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// POST /api/datasets body. Returns {dataset_id, status}.
    json create_dataset(const json& body);
    json create_dataset_csv(const std::string& csv, const json& options);
    json dataset(const std::string& id) const;
    json grid(const std::string& id, int d) const;

    /// POST /api/solve and /api/solve/circular. Returns the queued RunRecord.
    json submit_discrete(const json& body);
    json submit_circular(const json& body);

    json runs() const;
    json run(const std::string& id) const;
    void delete_run(const std::string& id);

    /// Blocks until no dataset or run is queued or in progress.
    void wait_idle();

    static json schema();

    void mount(httplib::Server& server, const std::string& cors_origin = "*");

private:
    struct DatasetEntry {
        json meta;
        std::shared_ptr<const pipeline::PreparedData> data;
    };

    void enqueue(std::function<void()> job);
    void worker_loop(std::stop_token stop);
    std::string new_id(const std::string& prefix);
    std::shared_ptr<const pipeline::PreparedData> ready_dataset(const std::string& id, json* meta = nullptr) const;
    json register_dataset(json meta, std::function<TrajectorySet()> load);
    void persist_run(const json& record);
    void persist_dataset_meta(const json& meta);
    void load_state();
    void finish_run(const std::string& id, const std::function<json(json&)>& work);

    std::filesystem::path state_dir_;
    mutable std::mutex mutex_;
    std::condition_variable_any cv_;
    std::condition_variable_any idle_cv_;
    std::deque<std::function<void()>> jobs_;
    int active_ = 0;
    std::map<std::string, DatasetEntry> datasets_;
    std::map<std::string, json> runs_;
    std::uint64_t counter_ = 0;
    std::vector<std::jthread> workers_;
};

/// Runs the HTTP API until the process is stopped.
int serve(const std::string& host, int port, const std::filesystem::path& state_dir);

}  // namespace geofence::service
