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

#include "geofence/service.hpp"

#include <httplib.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <random>
#include <sstream>

namespace geofence::service {

namespace fs = std::filesystem;

namespace {

std::string utc_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday,
                  tm.tm_hour, tm.tm_min, tm.tm_sec, static_cast<int>(ms));
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorKind::io, "cannot write '" + tmp.string() + "'");
        out << content;
    }
    fs::rename(tmp, path);
}

bool valid_id(const std::string& id) {
    if (id.empty() || id.size() > 64) return false;
    for (char c : id)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_')) return false;
    return true;
}

Point2 point_from_json(const json& j) {
    try {
        if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
        if (j.is_object()) return {j.at("x").get<double>(), j.at("y").get<double>()};
    } catch (const json::exception&) {
    }
    fail(ErrorKind::invalid_argument, "point must be [x, y] or {\"x\": ..., \"y\": ...}");
}

template <typename T>
T field(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::invalid_argument, std::string("field '") + key + "' has the wrong type");
    }
}

std::uint64_t required_seed(const json& body) {
    if (!body.contains("seed") || !body.at("seed").is_number_integer() || body.at("seed").get<std::int64_t>() < 0)
        fail(ErrorKind::invalid_argument, "requests must carry an explicit non-negative integer 'seed'");
    return body.at("seed").get<std::uint64_t>();
}

pipeline::DataOptions filters_from_json(const json& j) {
    pipeline::DataOptions opts;
    if (j.is_null()) return opts;
    require(j.is_object(), "filters must be an object");
    if (j.contains("min_points")) opts.min_points = field<std::size_t>(j, "min_points", 1);
    if (j.contains("region_center")) opts.region_center = point_from_json(j.at("region_center"));
    if (j.contains("region_radius")) opts.region_radius = field<double>(j, "region_radius", 0.0);
    return opts;
}

CsvOptions csv_options_from_json(const json& j) {
    CsvOptions o;
    if (j.is_null()) return o;
    require(j.is_object(), "csv_options must be an object");
    o.header = field(j, "header", false);
    o.iso_time = field(j, "iso_time", false);
    o.latlon = field(j, "latlon", false);
    return o;
}

json error_body(ErrorKind kind, const std::string& message) {
    return {{"error", {{"kind", std::string(to_string(kind))}, {"message", message}}}};
}

constexpr int kServiceMaxLevel = 8;

}  // namespace

int http_status(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::invalid_argument:
        case ErrorKind::parse: return 400;
        case ErrorKind::not_found: return 404;
        case ErrorKind::conflict: return 409;
        case ErrorKind::infeasible: return 422;
        case ErrorKind::io: return 500;
    }
    return 500;
}

Service::Service(fs::path state_dir, int workers) : state_dir_(std::move(state_dir)) {
    fs::create_directories(state_dir_ / "runs");
    fs::create_directories(state_dir_ / "datasets");
    load_state();
    for (int i = 0; i < std::max(1, workers); ++i)
        workers_.emplace_back([this](std::stop_token stop) { worker_loop(stop); });
}

Service::~Service() {
    for (auto& w : workers_) w.request_stop();
    cv_.notify_all();
    workers_.clear();
}

void Service::enqueue(std::function<void()> job) {
    {
        std::lock_guard lock(mutex_);
        jobs_.push_back(std::move(job));
    }
    cv_.notify_one();
}

void Service::worker_loop(std::stop_token stop) {
    while (true) {
        std::function<void()> job;
        {
            std::unique_lock lock(mutex_);
            if (!cv_.wait(lock, stop, [this] { return !jobs_.empty(); })) return;
            job = std::move(jobs_.front());
            jobs_.pop_front();
            ++active_;
        }
        job();
        {
            std::lock_guard lock(mutex_);
            --active_;
        }
        idle_cv_.notify_all();
    }
}

void Service::wait_idle() {
    std::unique_lock lock(mutex_);
    idle_cv_.wait(lock, [this] {
        if (!jobs_.empty() || active_ > 0) return false;
        for (const auto& [id, d] : datasets_)
            if (d.meta.value("status", "") == "processing") return false;
        return true;
    });
}

std::string Service::new_id(const std::string& prefix) {
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06llx%010llx", static_cast<unsigned long long>(++counter_ & 0xffffff),
                  static_cast<unsigned long long>(rng() & 0xffffffffffULL));
    return prefix + buf;
}

void Service::persist_run(const json& record) {
    write_atomic(state_dir_ / "runs" / (record.at("run_id").get<std::string>() + ".json"), record.dump(2));
}

void Service::persist_dataset_meta(const json& meta) {
    write_atomic(state_dir_ / "datasets" / (meta.at("dataset_id").get<std::string>() + ".json"), meta.dump(2));
}

void Service::load_state() {
    for (const auto& entry : fs::directory_iterator(state_dir_ / "runs")) {
        if (entry.path().extension() != ".json") continue;
        try {
            auto record = io::read_json_file(entry.path().string());
            const auto status = record.value("status", "");
            if (status == "queued" || status == "running") {
                record["status"] = "failed";
                record["error"] = error_body(ErrorKind::io, "interrupted by service restart")["error"];
                persist_run(record);
            }
            const auto id = record.at("run_id").get<std::string>();
            runs_[id] = std::move(record);
        } catch (const std::exception&) {
            // Skip unreadable records; they stay on disk for inspection.
        }
    }
    for (const auto& entry : fs::directory_iterator(state_dir_ / "datasets")) {
        if (entry.path().extension() != ".json") continue;
        try {
            auto meta = io::read_json_file(entry.path().string());
            const auto id = meta.at("dataset_id").get<std::string>();
            DatasetEntry d{meta, nullptr};
            if (meta.value("status", "") == "ready") {
                std::ifstream csv(state_dir_ / "datasets" / (id + ".csv"));
                auto raw = parse_trajectories(csv, {});
                d.data = std::make_shared<const pipeline::PreparedData>(
                    pipeline::prepare(std::move(raw), filters_from_json(meta.value("filters", json()))));
            } else if (meta.value("status", "") == "processing") {
                d.meta["status"] = "failed";
                d.meta["error"] = error_body(ErrorKind::io, "interrupted by service restart")["error"];
                persist_dataset_meta(d.meta);
            }
            datasets_[id] = std::move(d);
        } catch (const std::exception&) {
        }
    }
}

json Service::register_dataset(json meta, std::function<TrajectorySet()> load) {
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = new_id("ds-");
        meta["dataset_id"] = id;
        meta["status"] = "processing";
        meta["created_at"] = utc_now();
        datasets_[id] = {meta, nullptr};
    }
    persist_dataset_meta(meta);
    const auto filters = filters_from_json(meta.value("filters", json()));
    enqueue([this, id, filters, load = std::move(load)] {
        json meta_now;
        std::shared_ptr<const pipeline::PreparedData> prepared;
        try {
            auto raw = load();
            {
                std::ofstream csv(state_dir_ / "datasets" / (id + ".csv"), std::ios::binary | std::ios::trunc);
                io::write_trajectories(csv, raw);
            }
            prepared = std::make_shared<const pipeline::PreparedData>(pipeline::prepare(std::move(raw), filters));
            std::lock_guard lock(mutex_);
            auto& d = datasets_.at(id);
            d.data = prepared;
            d.meta["status"] = "ready";
            d.meta["users"] = prepared->source.users();
            d.meta["points"] = prepared->source.total_points();
            d.meta["bbox"] = io::to_json(prepared->bbox);
            meta_now = d.meta;
        } catch (const Error& e) {
            std::lock_guard lock(mutex_);
            auto& d = datasets_.at(id);
            d.meta["status"] = "failed";
            d.meta["error"] = error_body(e.kind(), e.what())["error"];
            meta_now = d.meta;
        } catch (const std::exception& e) {
            std::lock_guard lock(mutex_);
            auto& d = datasets_.at(id);
            d.meta["status"] = "failed";
            d.meta["error"] = error_body(ErrorKind::io, e.what())["error"];
            meta_now = d.meta;
        }
        persist_dataset_meta(meta_now);
    });
    return {{"dataset_id", id}, {"status", "processing"}};
}

json Service::create_dataset(const json& body) {
    require(body.is_object(), "dataset request must be a JSON object");
    json meta{{"filters", body.value("filters", json())}};
    filters_from_json(meta["filters"]);  // validate early
    if (body.contains("csv")) {
        return create_dataset_csv(field<std::string>(body, "csv", ""), body);
    }
    synth::SynthConfig config;
    if (body.contains("preset")) {
        config = synth::preset(field<std::string>(body, "preset", ""));
        meta["source"] = "preset:" + body.at("preset").get<std::string>();
    } else if (body.contains("synth")) {
        config = io::synth_config_from_json(body.at("synth"));
        meta["source"] = "synth";
    } else {
        fail(ErrorKind::invalid_argument, "dataset request needs one of 'csv', 'preset' or 'synth'");
    }
    config.validate();
    // POIs are cheap to compute and are needed by clients right away.
    const auto graph = synth::generate_graph(config.n, config.thin_p, config.seed);
    json pois = json::array();
    for (const auto& p : synth::place_pois(config.k_pois, config.seed, graph)) pois.push_back({{"x", p.x}, {"y", p.y}});
    meta["pois"] = pois;
    meta["synth"] = {{"n", config.n},           {"thin_p", config.thin_p}, {"m", config.m},
                     {"noise_std", config.noise_std}, {"k_pois", config.k_pois}, {"seed", config.seed},
                     {"points_per_edge", config.points_per_edge}};
    return register_dataset(std::move(meta), [config] { return synth::build_dataset(config).data; });
}

json Service::create_dataset_csv(const std::string& csv, const json& options) {
    json meta{{"source", "csv"},
              {"filters", options.is_object() ? options.value("filters", json()) : json()},
              {"pois", json::array()}};
    const auto csv_opts = csv_options_from_json(options.is_object() ? options.value("csv_options", json()) : json());
    filters_from_json(meta["filters"]);
    return register_dataset(std::move(meta), [csv, csv_opts] {
        std::istringstream in(csv);
        return parse_trajectories(in, csv_opts);
    });
}

std::shared_ptr<const pipeline::PreparedData> Service::ready_dataset(const std::string& id, json* meta) const {
    std::lock_guard lock(mutex_);
    auto it = datasets_.find(id);
    if (it == datasets_.end()) fail(ErrorKind::not_found, "unknown dataset '" + id + "'");
    const auto status = it->second.meta.value("status", "");
    if (status == "processing") fail(ErrorKind::conflict, "dataset '" + id + "' is still processing");
    if (status != "ready") fail(ErrorKind::invalid_argument, "dataset '" + id + "' failed to load");
    if (meta) *meta = it->second.meta;
    return it->second.data;
}

json Service::dataset(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = datasets_.find(id);
    if (it == datasets_.end()) fail(ErrorKind::not_found, "unknown dataset '" + id + "'");
    return it->second.meta;
}

json Service::grid(const std::string& id, int d) const {
    require(d >= 1 && d <= kServiceMaxLevel, "d must be in [1, " + std::to_string(kServiceMaxLevel) + "]");
    json meta;
    auto data = ready_dataset(id, &meta);
    const auto m = discretize(data->normalized, d, DensityScale::max_cell, data->bbox);
    json out = io::to_json(m);
    out["dataset_id"] = id;
    json pois = json::array();
    for (const auto& p : meta.value("pois", json::array())) {
        const Point2 pt{p.at("x").get<double>(), p.at("y").get<double>()};
        json entry{{"x", pt.x}, {"y", pt.y}};
        if (data->bbox.contains(pt.x, pt.y)) {
            const auto cell = poi_to_cell(pt, data->bbox, d);
            entry["row"] = cell.row;
            entry["col"] = cell.col;
        }
        pois.push_back(std::move(entry));
    }
    out["pois"] = std::move(pois);
    return out;
}

void Service::finish_run(const std::string& id, const std::function<json(json&)>& work) {
    json record;
    {
        std::lock_guard lock(mutex_);
        auto it = runs_.find(id);
        if (it == runs_.end()) return;  // deleted while queued
        it->second["status"] = "running";
        record = it->second;
    }
    persist_run(record);
    try {
        work(record);
        record["status"] = "done";
    } catch (const Error& e) {
        record["status"] = "failed";
        record["error"] = error_body(e.kind(), e.what())["error"];
    } catch (const std::exception& e) {
        record["status"] = "failed";
        record["error"] = error_body(ErrorKind::io, e.what())["error"];
    }
    record["finished_at"] = utc_now();
    {
        std::lock_guard lock(mutex_);
        runs_[id] = record;
    }
    persist_run(record);
}

json Service::submit_discrete(const json& body) {
    require(body.is_object(), "solve request must be a JSON object");
    const auto dataset_id = field<std::string>(body, "dataset_id", "");
    require(!dataset_id.empty(), "solve request needs a dataset_id");
    auto data = ready_dataset(dataset_id);

    pipeline::DiscreteRequest req;
    req.d = field(body, "d", 4);
    require(req.d >= 1 && req.d <= kServiceMaxLevel, "d must be in [1, " + std::to_string(kServiceMaxLevel) + "]");
    req.weights = io::weights_from_json(body.value("weights", json()));
    if (body.contains("window") && body.at("window").is_null()) {
        req.use_window = false;
    } else if (body.contains("window")) {
        const auto& w = body.at("window");
        require(w.is_object(), "window must be an object or null");
        req.area_min_pct = field(w, "min_pct", 0.0);
        req.area_max_pct = field(w, "max_pct", 15.0);
    }
    req.flags = io::flags_from_json(body.value("flags", json()), 1 << req.d);
    req.solver = pipeline::parse_solver(field<std::string>(body, "solver", "anneal"));
    req.schedule = io::schedule_from_json(body.value("schedule", json()));
    req.schedule.seed = required_seed(body);
    req.d_coarse = field(body, "d_coarse", 0);
    if (body.contains("poi_cell")) {
        const auto& pc = body.at("poi_cell");
        PoiCell cell{field(pc, "row", -1), field(pc, "col", -1)};
        require(cell.row >= 0 && cell.col >= 0 && cell.row < (1 << req.d) && cell.col < (1 << req.d),
                "poi_cell outside the grid");
        req.poi = pipeline::cell_center(cell, GridSpec(req.d, data->bbox));
    } else if (body.contains("poi")) {
        req.poi = point_from_json(body.at("poi"));
    } else {
        fail(ErrorKind::invalid_argument, "solve request needs 'poi' or 'poi_cell'");
    }
    pipeline::build_request_model(*data, req);

    json record{{"kind", "discrete"}, {"status", "queued"}, {"dataset_id", dataset_id},
                {"request", body},    {"result", nullptr},  {"metrics", nullptr}};
    record["request"]["poi_resolved"] = {req.poi.x, req.poi.y};
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = new_id("run-");
        record["run_id"] = id;
        record["created_at"] = utc_now();
        runs_[id] = record;
    }
    persist_run(record);
    enqueue([this, id, data, req] {
        finish_run(id, [&](json& rec) {
            const auto outcome = pipeline::run_discrete(*data, req);
            rec["result"] = io::to_json(outcome);
            rec["metrics"] = io::to_json(outcome.coverage, true);
            rec["timing"] = {{"wall_time", outcome.result.wall_time}};
            return rec;
        });
    });
    return record;
}

json Service::submit_circular(const json& body) {
    require(body.is_object(), "solve request must be a JSON object");
    const auto dataset_id = field<std::string>(body, "dataset_id", "");
    require(!dataset_id.empty(), "solve request needs a dataset_id");
    auto data = ready_dataset(dataset_id);

    pipeline::CircularRequest req;
    require(body.contains("poi"), "circular solve request needs 'poi'");
    req.poi = point_from_json(body.at("poi"));
    require(data->bbox.contains(req.poi.x, req.poi.y), "POI lies outside the data bounding box");
    req.params.cr_limit = field(body, "cr_limit", req.params.cr_limit);
    req.params.mu = field(body, "mu", req.params.mu);
    req.params.population = field(body, "population", req.params.population);
    req.params.generations = field(body, "generations", req.params.generations);
    req.params.r_max = field(body, "r_max", req.params.r_max);
    req.params.maximize = field(body, "maximize", false);
    req.params.seed = required_seed(body);
    req.cover_oriented = field(body, "cover_oriented", false);
    req.r_star = field(body, "r_star", 0.0);
    req.epsilon = field(body, "epsilon", 0.01);
    require(req.params.cr_limit >= 0.0 && req.params.cr_limit <= 1.0, "cr_limit must be in [0,1]");
    require(req.params.mu >= 0.0, "mu must be non-negative");
    require(req.params.population >= 4 && req.params.population <= 4096, "population must be in [4, 4096]");
    require(req.params.generations >= 0 && req.params.generations <= 100000, "generations must be in [0, 100000]");
    require(req.epsilon > 0.0, "epsilon must be positive");
    require(!req.cover_oriented || req.r_star == 0.0 || req.r_star > req.epsilon, "infeasible radius window");

    json record{{"kind", "circular"}, {"status", "queued"}, {"dataset_id", dataset_id},
                {"request", body},    {"result", nullptr},  {"metrics", nullptr}};
    std::string id;
    {
        std::lock_guard lock(mutex_);
        id = new_id("run-");
        record["run_id"] = id;
        record["created_at"] = utc_now();
        runs_[id] = record;
    }
    persist_run(record);
    enqueue([this, id, data, req] {
        finish_run(id, [&](json& rec) {
            const auto start = std::chrono::steady_clock::now();
            const auto outcome = pipeline::run_circular(*data, req);
            rec["result"] = io::to_json(outcome);
            rec["metrics"] = io::to_json(outcome.coverage, true);
            rec["timing"] = {
                {"wall_time", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
            return rec;
        });
    });
    return record;
}

json Service::runs() const {
    std::lock_guard lock(mutex_);
    json out = json::array();
    for (const auto& [id, r] : runs_) {
        json summary{{"run_id", id},
                     {"kind", r.value("kind", "")},
                     {"status", r.value("status", "")},
                     {"dataset_id", r.value("dataset_id", "")},
                     {"created_at", r.value("created_at", "")}};
        if (r.contains("metrics") && r["metrics"].is_object()) {
            summary["ucr"] = r["metrics"].value("ucr", 0.0);
            summary["upcr_mean"] = r["metrics"].value("upcr_mean", 0.0);
        }
        out.push_back(std::move(summary));
    }
    std::stable_sort(out.begin(), out.end(), [](const json& a, const json& b) {
        return a["created_at"].get<std::string>() < b["created_at"].get<std::string>();
    });
    return out;
}

json Service::run(const std::string& id) const {
    std::lock_guard lock(mutex_);
    auto it = runs_.find(id);
    if (it == runs_.end()) fail(ErrorKind::not_found, "unknown run '" + id + "'");
    return it->second;
}

void Service::delete_run(const std::string& id) {
    {
        std::lock_guard lock(mutex_);
        auto it = runs_.find(id);
        if (it == runs_.end()) fail(ErrorKind::not_found, "unknown run '" + id + "'");
        const auto status = it->second.value("status", "");
        if (status == "running") fail(ErrorKind::conflict, "run '" + id + "' is still running");
        runs_.erase(it);
    }
    std::error_code ec;
    fs::remove(state_dir_ / "runs" / (id + ".json"), ec);
}

json Service::schema() {
    const Weights w;
    return {
        {"d", {{"min", 1}, {"max", kServiceMaxLevel}, {"default", 4}}},
        {"weights",
         {{"a_area", {{"min", 0.0}, {"max", 1000.0}, {"default", w.a_area}}},
          {"a_cover", {{"min", 0.0}, {"max", 1000.0}, {"default", w.a_cover}}},
          {"a_2dw", {{"min", 0.0}, {"max", 100.0}, {"default", w.a_2dw}}},
          {"a_ng", {{"min", 0.0}, {"max", 100.0}, {"default", w.a_ng}}},
          {"alpha", {{"min", 0.01}, {"max", 10.0}, {"default", w.alpha}}},
          {"sigma", {{"min", 0.01}, {"max", 100.0}, {"default", w.sigma}}}}},
        {"window",
         {{"min_pct", {{"min", 0.0}, {"max", 100.0}, {"default", 0.0}}},
          {"max_pct", {{"min", 0.0}, {"max", 100.0}, {"default", 15.0}}}}},
        {"solvers", {"anneal", "exact", "hier", "auto"}},
        {"dw_directions", {"RD", "LU", "RU", "LD"}},
        {"dw_default", {"RD", "LU"}},
        {"circular",
         {{"cr_limit", {{"min", 0.0}, {"max", 1.0}, {"default", 0.5}}},
          {"mu", {{"min", 0.0}, {"max", 1000.0}, {"default", 10.0}}},
          {"epsilon", {{"min", 1e-6}, {"max", 1.0}, {"default", 0.01}}}}},
    };
}

void Service::mount(httplib::Server& server, const std::string& cors_origin) {
    server.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                                {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/api/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    auto handle = [](auto&& fn) {
        return [fn](const httplib::Request& req, httplib::Response& res) {
            try {
                auto [status, body] = fn(req);
                res.status = status;
                res.set_content(body.dump(), "application/json");
            } catch (const Error& e) {
                res.status = http_status(e.kind());
                res.set_content(error_body(e.kind(), e.what()).dump(), "application/json");
            } catch (const json::exception& e) {
                res.status = 400;
                res.set_content(error_body(ErrorKind::parse, e.what()).dump(), "application/json");
            } catch (const std::exception& e) {
                res.status = 500;
                res.set_content(error_body(ErrorKind::io, e.what()).dump(), "application/json");
            }
        };
    };
    auto parse_body = [](const httplib::Request& req) {
        try {
            return json::parse(req.body);
        } catch (const json::exception& e) {
            fail(ErrorKind::parse, std::string("invalid JSON body: ") + e.what());
        }
    };
    auto path_id = [](const httplib::Request& req) {
        const std::string id = req.matches[1];
        if (!valid_id(id)) fail(ErrorKind::not_found, "unknown id");
        return id;
    };

    server.Get("/api/schema", handle([](const httplib::Request&) { return std::pair{200, schema()}; }));
    server.Post("/api/datasets", handle([this, parse_body](const httplib::Request& req) {
        const auto type = req.get_header_value("Content-Type");
        if (type.rfind("text/csv", 0) == 0) {
            json options{{"csv_options", {{"header", req.has_param("header") && req.get_param_value("header") == "true"}}}};
            return std::pair{200, create_dataset_csv(req.body, options)};
        }
        return std::pair{200, create_dataset(parse_body(req))};
    }));
    server.Get(R"(/api/datasets/([^/]+))", handle([this, path_id](const httplib::Request& req) {
        return std::pair{200, dataset(path_id(req))};
    }));
    server.Get(R"(/api/datasets/([^/]+)/grid)", handle([this, path_id](const httplib::Request& req) {
        int d = 4;
        if (req.has_param("d")) {
            const auto text = req.get_param_value("d");
            try {
                std::size_t used = 0;
                d = std::stoi(text, &used);
                if (used != text.size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                fail(ErrorKind::invalid_argument, "d must be an integer");
            }
        }
        return std::pair{200, grid(path_id(req), d)};
    }));
    server.Post("/api/solve", handle([this, parse_body](const httplib::Request& req) {
        return std::pair{200, submit_discrete(parse_body(req))};
    }));
    server.Post("/api/solve/circular", handle([this, parse_body](const httplib::Request& req) {
        return std::pair{200, submit_circular(parse_body(req))};
    }));
    server.Get("/api/runs", handle([this](const httplib::Request&) { return std::pair{200, runs()}; }));
    server.Get(R"(/api/runs/([^/]+))", handle([this, path_id](const httplib::Request& req) {
        return std::pair{200, run(path_id(req))};
    }));
    server.Delete(R"(/api/runs/([^/]+))", handle([this, path_id](const httplib::Request& req) {
        const auto id = path_id(req);
        delete_run(id);
        return std::pair{200, json{{"deleted", id}}};
    }));
}

int serve(const std::string& host, int port, const fs::path& state_dir) {
    Service service(state_dir, static_cast<int>(std::max(2u, std::thread::hardware_concurrency())));
    httplib::Server server;
    service.mount(server);
    std::fprintf(stderr, "listening on http://%s:%d (state: %s)\n", host.c_str(), port, state_dir.string().c_str());
    if (!server.listen(host, port)) {
        std::fprintf(stderr, "failed to bind %s:%d\n", host.c_str(), port);
        return 1;
    }
    return 0;
}

}  // namespace geofence::service
