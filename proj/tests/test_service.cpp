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

#include <catch_amalgamated.hpp>

#include <httplib.h>

#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "geofence/cli.hpp"
#include "geofence/service.hpp"

using namespace geofence;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("dgeofence-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Running {
    httplib::Server server;
    std::unique_ptr<service::Service> svc;
    std::thread thread;
    int port = 0;

    explicit Running(const fs::path& state) : svc(std::make_unique<service::Service>(state)) {
        svc->mount(server);
        port = server.bind_to_any_port("127.0.0.1");
        thread = std::thread([this] { server.listen_after_bind(); });
        server.wait_until_ready();
    }
    ~Running() {
        server.stop();
        thread.join();
    }
};

json body(const httplib::Result& r) { return json::parse(r->body); }

std::string wait_run(service::Service& svc, const std::string& id) {
    svc.wait_idle();
    return svc.run(id)["status"].get<std::string>();
}

}  // namespace

TEST_CASE("HTTP API end to end") {
    TempDir dir;
    Running api(dir.path);
    httplib::Client cli("127.0.0.1", api.port);

    auto schema = cli.Get("/api/schema");
    REQUIRE(schema);
    CHECK(schema->status == 200);
    CHECK(body(schema)["d"]["max"] == 8);

    CHECK(cli.Get("/api/runs/none")->status == 404);
    CHECK(cli.Get("/api/datasets/none")->status == 404);
    CHECK(cli.Post("/api/datasets", "{not json", "application/json")->status == 400);

    auto created = cli.Post("/api/datasets", R"({"preset":"data1"})", "application/json");
    REQUIRE(created->status == 200);
    const auto ds = body(created)["dataset_id"].get<std::string>();
    api.svc->wait_idle();
    auto meta = body(cli.Get("/api/datasets/" + ds));
    CHECK(meta["status"] == "ready");
    CHECK(meta["users"] == 150);

    auto grid = cli.Get("/api/datasets/" + ds + "/grid?d=3");
    REQUIRE(grid->status == 200);
    CHECK(body(grid)["grid"]["L"] == 8);
    CHECK(cli.Get("/api/datasets/" + ds + "/grid?d=12")->status == 400);

    const json solve{{"dataset_id", ds}, {"poi", {0.9090909090909091, 0.7272727272727273}}, {"seed", 5}, {"d", 3}};
    CHECK(cli.Post("/api/solve", json{{"dataset_id", ds}, {"poi", {0.5, 0.5}}}.dump(), "application/json")->status == 400);
    auto infeasible = solve;
    infeasible["window"] = {{"min_pct", 50}, {"max_pct", 60}};
    infeasible["flags"] = {{"forbidden_cells", json::array()}};
    for (int k = 0; k < 40; ++k) infeasible["flags"]["forbidden_cells"].push_back(k);
    CHECK(cli.Post("/api/solve", infeasible.dump(), "application/json")->status == 422);

    auto a = body(cli.Post("/api/solve", solve.dump(), "application/json"));
    auto b = body(cli.Post("/api/solve", solve.dump(), "application/json"));
    CHECK(wait_run(*api.svc, a["run_id"]) == "done");
    CHECK(wait_run(*api.svc, b["run_id"]) == "done");
    const auto ra = body(cli.Get("/api/runs/" + a["run_id"].get<std::string>()));
    const auto rb = body(cli.Get("/api/runs/" + b["run_id"].get<std::string>()));
    CHECK(ra["result"] == rb["result"]);
    CHECK(ra["result"]["feasible"] == true);

    auto circ = body(cli.Post("/api/solve/circular", json{{"dataset_id", ds}, {"poi", {0.9, 0.7}}, {"seed", 1}}.dump(), "application/json"));
    CHECK(wait_run(*api.svc, circ["run_id"]) == "done");

    auto list = body(cli.Get("/api/runs"));
    CHECK(list.size() == 3);
    CHECK(cli.Delete("/api/runs/" + b["run_id"].get<std::string>())->status == 200);
    CHECK(cli.Get("/api/runs/" + b["run_id"].get<std::string>())->status == 404);

    auto options = cli.Options("/api/solve");
    CHECK(options->status == 204);
    CHECK(options->has_header("Access-Control-Allow-Origin"));
}

TEST_CASE("state survives a restart") {
    TempDir dir;
    std::string ds, run;
    {
        service::Service svc(dir.path);
        ds = svc.create_dataset(json{{"preset", "data2"}})["dataset_id"];
        svc.wait_idle();
        run = svc.submit_discrete(json{{"dataset_id", ds}, {"poi", {0.5, 0.5}}, {"seed", 1}, {"d", 2}})["run_id"];
        svc.wait_idle();
    }
    service::Service svc(dir.path);
    CHECK(svc.dataset(ds)["status"] == "ready");
    CHECK(svc.run(run)["status"] == "done");
    const auto again = svc.submit_discrete(json{{"dataset_id", ds}, {"poi", {0.5, 0.5}}, {"seed", 1}, {"d", 2}});
    svc.wait_idle();
    CHECK(svc.run(again["run_id"])["result"] == svc.run(run)["result"]);
}

TEST_CASE("CLI and HTTP produce identical results") {
    TempDir dir;
    service::Service svc(dir.path);
    const auto ds = svc.create_dataset(json{{"preset", "data1"}})["dataset_id"].get<std::string>();
    svc.wait_idle();
    const auto run = svc.submit_discrete(
        json{{"dataset_id", ds}, {"poi", {0.25, 0.75}}, {"seed", 11}, {"d", 3}, {"schedule", {{"sweeps", 500}}}});
    svc.wait_idle();
    const auto http = svc.run(run["run_id"])["result"];

    std::ostringstream csv, err, out;
    std::istringstream none;
    REQUIRE(cli::run({"synth", "--preset", "data1"}, none, csv, err) == 0);
    std::istringstream data(csv.str());
    REQUIRE(cli::run({"solve-discrete", "--poi", "0.25,0.75", "--seed", "11", "--d", "3", "--sweeps", "500"}, data, out, err) == 0);
    CHECK(http.dump(2) + "\n" == out.str());
}
