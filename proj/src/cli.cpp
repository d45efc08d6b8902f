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

#include "geofence/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "geofence/geojson.hpp"
#include "geofence/json_io.hpp"
#include "geofence/pipeline.hpp"
#include "geofence/service.hpp"
#include "geofence/synth.hpp"

namespace geofence::cli {

namespace {

using json = nlohmann::json;

Point2 parse_point(const std::string& text, const char* what) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) fail(ErrorKind::invalid_argument, std::string(what) + " must be X,Y");
    try {
        std::size_t a = 0, b = 0;
        const double x = std::stod(text.substr(0, comma), &a);
        const double y = std::stod(text.substr(comma + 1), &b);
        if (a != comma || b != text.size() - comma - 1) throw std::invalid_argument("trailing");
        return {x, y};
    } catch (const std::exception&) {
        fail(ErrorKind::invalid_argument, std::string(what) + " must be X,Y with numeric coordinates");
    }
}

struct DataCli {
    std::string path = "-";
    bool header = false;
    bool iso_time = false;
    bool latlon = false;
    std::size_t min_points = 0;
    std::string region_center;
    double region_radius = 0.0;

    void add(CLI::App* app) {
        app->add_option("--data", path, "trajectory CSV (uid,t,x,y); '-' reads stdin");
        app->add_flag("--header", header, "skip the first CSV row");
        app->add_flag("--iso-time", iso_time, "t column holds ISO-8601 timestamps");
        app->add_flag("--latlon", latlon, "x/y are longitude/latitude degrees");
        app->add_option("--min-points", min_points, "drop users with fewer points");
        app->add_option("--region-center", region_center, "keep points near X,Y (source units)");
        app->add_option("--region-radius", region_radius, "radius for --region-center");
    }

    pipeline::DataOptions options() const {
        pipeline::DataOptions o;
        o.csv = {header, iso_time, latlon};
        if (min_points > 0) o.min_points = min_points;
        if (!region_center.empty()) o.region_center = parse_point(region_center, "--region-center");
        if (region_radius != 0.0 || !region_center.empty()) o.region_radius = region_radius;
        return o;
    }

    TrajectorySet load_raw(std::istream& in) const {
        const auto o = options();
        if (path == "-") return parse_trajectories(in, o.csv);
        std::ifstream file(path);
        if (!file) fail(ErrorKind::io, "cannot open '" + path + "'");
        return parse_trajectories(file, o.csv);
    }

    pipeline::PreparedData load(std::istream& in) const { return pipeline::prepare(load_raw(in), options()); }
};

struct DiscreteCli {
    int d = 4;
    std::string poi;
    Weights weights{};
    double area_min_pct = 0.0;
    double area_max_pct = 15.0;
    bool no_window = false;
    bool poi_hard = false;
    std::string dw_dirs = "RD,LU";
    std::string forbidden;
    std::uint64_t seed = 0;
    std::string solver = "anneal";
    std::size_t sweeps = AnnealSchedule{}.sweeps;
    int restarts = AnnealSchedule{}.restarts;
    double t_start = 0.0;
    double t_end = AnnealSchedule{}.t_end;
    bool no_polish = false;
    int d_coarse = 0;
    std::string density_scale = "max";

    void add(CLI::App* app) {
        app->add_option("--d", d, "discretization level (L = 2^d)");
        app->add_option("--poi", poi, "POI as X,Y in source units")->required();
        app->add_option("--a-area", weights.a_area, "area coefficient (used only with --no-window)");
        app->add_option("--a-cover", weights.a_cover, "cover coefficient");
        app->add_option("--a-2dw", weights.a_2dw, "domain-wall coefficient");
        app->add_option("--a-ng", weights.a_ng, "adjacency coefficient");
        app->add_option("--alpha", weights.alpha, "cover weight decay exponent");
        app->add_option("--sigma", weights.sigma, "adjacency kernel width");
        app->add_option("--area-min-pct", area_min_pct, "minimum selected cells, percent of L^2");
        app->add_option("--area-max-pct", area_max_pct, "maximum selected cells, percent of L^2");
        app->add_flag("--no-window", no_window, "unconstrained objective with the area term");
        app->add_flag("--poi-hard", poi_hard, "force the POI cell to be selected");
        app->add_option("--dw-dirs", dw_dirs, "domain-wall directions, subset of RD,LU,RU,LD");
        app->add_option("--forbidden", forbidden, "cells forced to 0, as r:c pairs separated by commas");
        app->add_option("--seed", seed, "random seed");
        app->add_option("--solver", solver, "exact | anneal | hier | auto");
        app->add_option("--sweeps", sweeps, "annealing sweeps per restart");
        app->add_option("--restarts", restarts, "annealing restarts");
        app->add_option("--t-start", t_start, "initial temperature (0 = auto)");
        app->add_option("--t-end", t_end, "final temperature");
        app->add_flag("--no-polish", no_polish, "skip local search after annealing");
        app->add_option("--d-coarse", d_coarse, "coarse level for --solver hier (default d-2)");
        app->add_option("--density-scale", density_scale, "max | users");
    }

    pipeline::DiscreteRequest request() const {
        pipeline::DiscreteRequest r;
        r.d = d;
        r.poi = parse_point(poi, "--poi");
        r.weights = weights;
        r.use_window = !no_window;
        r.area_min_pct = area_min_pct;
        r.area_max_pct = area_max_pct;
        r.flags.poi_hard = poi_hard;
        r.flags.dw_directions = parse_directions(dw_dirs);
        require(d >= 1 && d <= 10, "d must be in [1, 10]");
        const int side = 1 << d;
        std::stringstream ss(forbidden);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item.empty()) continue;
            const auto colon = item.find(':');
            require(colon != std::string::npos, "--forbidden entries must be r:c");
            int row = -1, col = -1;
            try {
                row = std::stoi(item.substr(0, colon));
                col = std::stoi(item.substr(colon + 1));
            } catch (const std::exception&) {
                fail(ErrorKind::invalid_argument, "--forbidden entries must be integer r:c");
            }
            require(row >= 0 && col >= 0 && row < side && col < side, "--forbidden cell outside the grid");
            r.flags.forbidden_cells.push_back(static_cast<std::size_t>(row) * side + col);
        }
        r.solver = pipeline::parse_solver(solver);
        r.schedule.sweeps = sweeps;
        r.schedule.restarts = restarts;
        r.schedule.t_start = t_start;
        r.schedule.t_end = t_end;
        r.schedule.polish = !no_polish;
        r.schedule.seed = seed;
        r.d_coarse = d_coarse;
        if (density_scale == "max") r.scale = DensityScale::max_cell;
        else if (density_scale == "users") r.scale = DensityScale::user_count;
        else fail(ErrorKind::invalid_argument, "--density-scale must be max or users");
        return r;
    }
};

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
    out << text;
}

json error_json(const std::string& kind, const std::string& message) {
    return {{"error", {{"kind", kind}, {"message", message}}}};
}

TrajectorySet normalize_with(const TrajectorySet& data, const BBox& bbox) {
    TrajectorySet out = data;
    for (auto& t : out.trajectories)
        for (auto& p : t.points) {
            const auto u = to_unit({p.x, p.y}, bbox);
            p.x = u.x;
            p.y = u.y;
        }
    return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discrete and circular geofence design", "dgeofence"};
    app.require_subcommand(0, 1);
    app.set_version_flag("--version", std::string("dgeofence ") + kVersion);

    // ingest
    DataCli ingest_data;
    std::string ingest_out;
    int ingest_d = 0;
    auto* ingest = app.add_subcommand("ingest", "parse, filter and summarize trajectory data");
    ingest_data.add(ingest);
    ingest->add_option("--out", ingest_out, "write the filtered CSV here");
    ingest->add_option("--d", ingest_d, "also emit the density grid at this level");

    // synth
    std::string synth_preset, synth_out, synth_pois_out;
    synth::SynthConfig synth_cfg;
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic trajectory dataset");
    synth_cmd->add_option("--preset", synth_preset, "data1 | data2");
    synth_cmd->add_option("--n", synth_cfg.n, "lattice side");
    synth_cmd->add_option("--thin-p", synth_cfg.thin_p, "edge removal probability");
    synth_cmd->add_option("--m", synth_cfg.m, "trajectory count");
    synth_cmd->add_option("--noise", synth_cfg.noise_std, "Gaussian noise std (normalized units)");
    synth_cmd->add_option("--pois", synth_cfg.k_pois, "POI count");
    synth_cmd->add_option("--seed", synth_cfg.seed, "random seed");
    synth_cmd->add_option("--points-per-edge", synth_cfg.points_per_edge, "interpolated points per lattice edge");
    synth_cmd->add_option("--out", synth_out, "CSV output path (default stdout)");
    synth_cmd->add_option("--pois-out", synth_pois_out, "write POIs as JSON here");

    // solve-circular
    DataCli circ_data;
    std::string circ_poi, circ_geojson;
    pipeline::CircularRequest circ_req;
    auto* circ = app.add_subcommand("solve-circular", "optimize the circular baseline geofence");
    circ_data.add(circ);
    circ->add_option("--poi", circ_poi, "POI as X,Y in source units")->required();
    circ->add_option("--cr-limit", circ_req.params.cr_limit, "minimum user coverage");
    circ->add_option("--mu", circ_req.params.mu, "coverage penalty coefficient");
    circ->add_option("--seed", circ_req.params.seed, "random seed");
    circ->add_option("--population", circ_req.params.population, "population size");
    circ->add_option("--generations", circ_req.params.generations, "generations");
    circ->add_option("--r-max", circ_req.params.r_max, "radius upper bound (normalized)");
    circ->add_flag("--maximize", circ_req.params.maximize, "maximize instead of minimize");
    circ->add_flag("--cover-oriented", circ_req.cover_oriented, "maximize coverage in a radius window");
    circ->add_option("--r-star", circ_req.r_star, "window center radius (normalized; 0 = min-cover optimum)");
    circ->add_option("--epsilon", circ_req.epsilon, "window half-width");
    circ->add_option("--geojson", circ_geojson, "also write GeoJSON here");

    // solve-discrete
    DataCli disc_data;
    DiscreteCli disc;
    std::string disc_geojson;
    bool disc_timing = false;
    auto* disc_cmd = app.add_subcommand("solve-discrete", "design a discrete geofence");
    disc_data.add(disc_cmd);
    disc.add(disc_cmd);
    disc_cmd->add_option("--geojson", disc_geojson, "also write GeoJSON here");
    disc_cmd->add_flag("--timing", disc_timing, "include wall_time in the output");

    // eval
    DataCli eval_data;
    std::string eval_geofence;
    auto* eval_cmd = app.add_subcommand("eval", "coverage report of a geofence against trajectory data");
    eval_data.add(eval_cmd);
    eval_cmd->add_option("--geofence", eval_geofence, "solve-circular or solve-discrete output")->required();

    // compare
    DataCli cmp_data;
    std::vector<std::string> cmp_circular, cmp_discrete;
    std::string cmp_report;
    auto* cmp = app.add_subcommand("compare", "per-user scatter of circular vs discrete coverage (CSV)");
    cmp_data.add(cmp);
    cmp->add_option("--circular", cmp_circular, "circular geofence documents")->required();
    cmp->add_option("--discrete", cmp_discrete, "discrete geofence documents")->required();
    cmp->add_option("--report", cmp_report, "write the full JSON report here");

    // export
    DataCli exp_data;
    DiscreteCli exp_disc;
    std::string exp_result;
    bool exp_model = false;
    auto* exp = app.add_subcommand("export", "GeoJSON of a solve result, or the quadratic model as JSON");
    exp->add_option("--result", exp_result, "solve result document to render as GeoJSON");
    exp->add_flag("--model", exp_model, "emit the model for the given data and model flags");
    exp_data.add(exp);
    exp_disc.add(exp);
    exp->get_option("--poi")->required(false);

    // serve
    std::string serve_addr = "127.0.0.1:8080";
    std::string serve_state;
    auto* serve_cmd = app.add_subcommand("serve", "run the HTTP/JSON API");
    serve_cmd->add_option("--addr", serve_addr, "host:port");
    serve_cmd->add_option("--state-dir", serve_state, "state directory (default $GEOFENCE_STATE_DIR or ./geofence-state)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion&) {
        out << "dgeofence " << kVersion << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << error_json("usage", e.what()).dump() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(ingest)) {
            auto data = ingest_data.load(in);
            json summary{{"users", data.source.users()}, {"points", data.source.total_points()}, {"bbox", io::to_json(data.bbox)}};
            if (ingest_d > 0) summary["density"] = io::to_json(discretize(data.normalized, ingest_d, DensityScale::max_cell, data.bbox));
            if (!ingest_out.empty()) {
                std::ofstream f(ingest_out, std::ios::binary | std::ios::trunc);
                if (!f) fail(ErrorKind::io, "cannot write '" + ingest_out + "'");
                io::write_trajectories(f, data.source);
            }
            out << summary.dump(2) << "\n";
        } else if (app.got_subcommand(synth_cmd)) {
            synth::SynthConfig cfg = synth_cfg;
            if (!synth_preset.empty()) {
                cfg = synth::preset(synth_preset);
                // Explicit flags override the preset.
                if (synth_cmd->count("--n")) cfg.n = synth_cfg.n;
                if (synth_cmd->count("--thin-p")) cfg.thin_p = synth_cfg.thin_p;
                if (synth_cmd->count("--m")) cfg.m = synth_cfg.m;
                if (synth_cmd->count("--noise")) cfg.noise_std = synth_cfg.noise_std;
                if (synth_cmd->count("--pois")) cfg.k_pois = synth_cfg.k_pois;
                if (synth_cmd->count("--seed")) cfg.seed = synth_cfg.seed;
                if (synth_cmd->count("--points-per-edge")) cfg.points_per_edge = synth_cfg.points_per_edge;
            }
            const auto ds = synth::build_dataset(cfg);
            json pois = json::array();
            for (const auto& p : ds.pois) pois.push_back({{"x", p.x}, {"y", p.y}});
            if (!synth_pois_out.empty()) write_text(synth_pois_out, pois.dump(2) + "\n");
            if (synth_out.empty() || synth_out == "-") {
                io::write_trajectories(out, ds.data);
            } else {
                std::ofstream f(synth_out, std::ios::binary | std::ios::trunc);
                if (!f) fail(ErrorKind::io, "cannot write '" + synth_out + "'");
                io::write_trajectories(f, ds.data);
                out << json{{"users", ds.data.users()}, {"points", ds.data.total_points()}, {"pois", pois}}.dump(2) << "\n";
            }
        } else if (app.got_subcommand(circ)) {
            auto data = circ_data.load(in);
            circ_req.poi = parse_point(circ_poi, "--poi");
            const auto outcome = pipeline::run_circular(data, circ_req);
            const auto doc = io::to_json(outcome);
            if (!circ_geojson.empty())
                write_text(circ_geojson, io::export_geojson(outcome.result.geofence, outcome.bbox).dump(2) + "\n");
            out << doc.dump(2) << "\n";
        } else if (app.got_subcommand(disc_cmd)) {
            auto data = disc_data.load(in);
            const auto outcome = pipeline::run_discrete(data, disc.request());
            if (!disc_geojson.empty()) {
                json props{{"solver_id", outcome.result.solver_id}, {"seed", outcome.result.seed},
                           {"feasible", outcome.result.feasible}};
                write_text(disc_geojson,
                           io::export_geojson(DiscreteGeofence{outcome.spec, outcome.result.x}, outcome.spec.bbox, props).dump(2) + "\n");
            }
            out << io::to_json(outcome, disc_timing).dump(2) << "\n";
        } else if (app.got_subcommand(eval_cmd)) {
            const auto loaded = io::geofence_from_json(io::read_json_file(eval_geofence));
            auto raw = eval_data.load_raw(in);
            auto prepared = pipeline::prepare(std::move(raw), eval_data.options());
            const auto report = coverage_report(loaded.geofence, normalize_with(prepared.source, loaded.bbox));
            out << io::to_json(report, true).dump(2) << "\n";
        } else if (app.got_subcommand(cmp)) {
            auto prepared = cmp_data.load(in);
            std::vector<CircularGeofence> circles;
            std::vector<DiscreteGeofence> grids;
            std::optional<BBox> bbox;
            auto check_bbox = [&](const BBox& b) {
                if (!bbox) bbox = b;
                else if (!(*bbox == b)) fail(ErrorKind::invalid_argument, "geofence documents use different bounding boxes");
            };
            for (const auto& path : cmp_circular) {
                auto g = io::geofence_from_json(io::read_json_file(path));
                require(std::holds_alternative<CircularGeofence>(g.geofence), path + " is not a circular geofence");
                check_bbox(g.bbox);
                circles.push_back(std::get<CircularGeofence>(g.geofence));
            }
            for (const auto& path : cmp_discrete) {
                auto g = io::geofence_from_json(io::read_json_file(path));
                require(std::holds_alternative<DiscreteGeofence>(g.geofence), path + " is not a discrete geofence");
                check_bbox(g.bbox);
                grids.push_back(std::get<DiscreteGeofence>(g.geofence));
            }
            const auto report = compare_report(circles, grids, normalize_with(prepared.source, *bbox));
            if (!cmp_report.empty()) write_text(cmp_report, io::to_json(report).dump(2) + "\n");
            out << scatter_csv(report);
        } else if (app.got_subcommand(exp)) {
            if (exp_model == !exp_result.empty())
                fail(ErrorKind::invalid_argument, "export needs exactly one of --result or --model");
            if (!exp_result.empty()) {
                out << io::export_geojson(io::geofence_from_json(io::read_json_file(exp_result))).dump(2) << "\n";
            } else {
                require(!exp_disc.poi.empty(), "--model needs --poi");
                auto data = exp_data.load(in);
                out << io::model_json(pipeline::build_request_model(data, exp_disc.request())).dump(2) << "\n";
            }
        } else if (app.got_subcommand(serve_cmd)) {
            std::string state = serve_state;
            if (state.empty()) {
                const char* env = std::getenv("GEOFENCE_STATE_DIR");
                state = env ? env : "geofence-state";
            }
            const auto colon = serve_addr.rfind(':');
            require(colon != std::string::npos, "--addr must be host:port");
            int port = 0;
            try {
                port = std::stoi(serve_addr.substr(colon + 1));
            } catch (const std::exception&) {
                fail(ErrorKind::invalid_argument, "--addr port must be an integer");
            }
            return service::serve(serve_addr.substr(0, colon), port, state);
        } else {
            out << app.help();
            return 2;
        }
    } catch (const Error& e) {
        err << error_json(std::string(to_string(e.kind())), e.what()).dump() << "\n";
        return e.kind() == ErrorKind::invalid_argument ? 2 : 1;
    } catch (const std::exception& e) {
        err << error_json("internal", e.what()).dump() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace geofence::cli
