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

#include "geofence/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace geofence::io {

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(ErrorKind::invalid_argument, std::string("field '") + key + "' has the wrong type");
    }
}

json cells_json(const Selection& x) {
    json cells = json::array();
    for (int r = 0; r < x.side(); ++r)
        for (int c = 0; c < x.side(); ++c)
            if (x(r, c)) cells.push_back({r, c});
    return cells;
}

}  // namespace

json to_json(const BBox& b) { return json::array({b.xmin, b.ymin, b.xmax, b.ymax}); }

BBox bbox_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) fail(ErrorKind::invalid_argument, "bbox must be [xmin, ymin, xmax, ymax]");
    try {
        return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
    } catch (const json::exception&) {
        fail(ErrorKind::invalid_argument, "bbox entries must be numbers");
    }
}

json to_json(const GridSpec& spec) { return {{"d", spec.d}, {"L", spec.side()}, {"bbox", to_json(spec.bbox)}}; }

GridSpec grid_spec_from_json(const json& j) {
    require(j.is_object() && j.contains("d") && j.contains("bbox"), "grid must carry d and bbox");
    return GridSpec(get_or<int>(j, "d", 0), bbox_from_json(j.at("bbox")));
}

json selection_rows(const Selection& x) {
    json rows = json::array();
    for (int r = 0; r < x.side(); ++r) {
        json row = json::array();
        for (int c = 0; c < x.side(); ++c) row.push_back(static_cast<int>(x(r, c)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Selection selection_from_rows(const json& rows) {
    require(rows.is_array() && !rows.empty(), "selection must be a non-empty array of rows");
    const int side = static_cast<int>(rows.size());
    Selection x(side, 0);
    for (int r = 0; r < side; ++r) {
        const auto& row = rows[static_cast<std::size_t>(r)];
        require(row.is_array() && static_cast<int>(row.size()) == side, "selection must be square");
        for (int c = 0; c < side; ++c) {
            const auto& v = row[static_cast<std::size_t>(c)];
            require(v.is_number_integer() && (v.get<int>() == 0 || v.get<int>() == 1), "selection entries must be 0 or 1");
            x(r, c) = static_cast<std::uint8_t>(v.get<int>());
        }
    }
    return x;
}

json to_json(const Breakdown& b) {
    return {{"total", b.total}, {"direct_total", b.direct_total}, {"area", b.area},          {"cover", b.cover},
            {"dw", b.dw},       {"ng", b.ng},                     {"window_violation", b.window_violation}};
}

json to_json(const CoverageReport& report, bool per_user) {
    json j{{"geofence_kind", report.geofence_kind},
           {"ucr", report.ucr},
           {"upcr_mean", report.upcr_mean},
           {"upcr_std", report.upcr_std}};
    if (per_user) {
        json users = json::array();
        for (const auto& u : report.per_user) users.push_back({{"uid", u.uid}, {"fraction", u.fraction}});
        j["per_user"] = std::move(users);
    }
    return j;
}

json to_json(const CellMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.values.side(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.values.side(); ++c) row.push_back(m.values(r, c));
        rows.push_back(std::move(row));
    }
    return {{"grid", to_json(m.spec)}, {"values", std::move(rows)}};
}

json to_json(const Weights& w) {
    return {{"a_area", w.a_area}, {"a_cover", w.a_cover}, {"a_2dw", w.a_2dw},
            {"a_ng", w.a_ng},     {"alpha", w.alpha},     {"sigma", w.sigma}};
}

json to_json(const ComparisonReport& report) {
    json j{{"circular", json::array()}, {"discrete", json::array()}, {"scatter", json::array()}};
    for (const auto& c : report.circular) j["circular"].push_back(to_json(c, false));
    for (const auto& d : report.discrete) j["discrete"].push_back(to_json(d, false));
    for (const auto& series : report.scatter) {
        json s = json::array();
        for (const auto& p : series) s.push_back({{"uid", p.uid}, {"circular", p.circular}, {"discrete", p.discrete}});
        j["scatter"].push_back(std::move(s));
    }
    return j;
}

json to_json(const pipeline::DiscreteOutcome& outcome, bool timing) {
    const auto& r = outcome.result;
    json j{{"kind", "discrete"},
           {"solver_id", r.solver_id},
           {"seed", r.seed},
           {"feasible", r.feasible},
           {"free_variables", r.free_variables},
           {"grid", to_json(outcome.spec)},
           {"poi", {{"row", outcome.poi.row}, {"col", outcome.poi.col}}},
           {"window", outcome.window ? json{{"min_cells", outcome.window->min_cells}, {"max_cells", outcome.window->max_cells}}
                                     : json(nullptr)},
           {"objective", to_json(r.breakdown)},
           {"selected_cells", cells_json(r.x)},
           {"x", selection_rows(r.x)},
           {"coverage", to_json(outcome.coverage, false)}};
    if (timing) j["wall_time"] = r.wall_time;
    return j;
}

json to_json(const pipeline::CircularOutcome& outcome) {
    const auto& g = outcome.result.geofence;
    const auto center = from_unit({g.cx, g.cy}, outcome.bbox);
    return {{"kind", "circular"},
            {"cx", g.cx},
            {"cy", g.cy},
            {"r", g.r},
            {"objective", outcome.result.objective},
            {"coverage", outcome.result.coverage},
            {"bbox", to_json(outcome.bbox)},
            {"center_source", {center.x, center.y}},
            {"evaluations", outcome.result.evaluations},
            {"metrics", to_json(outcome.coverage, false)}};
}

json model_json(const QuadraticModel& model) {
    json pairs = json::array();
    for (const auto& [key, w] : model.pairwise) pairs.push_back({{"i", key.first}, {"j", key.second}, {"w", w}});
    json fixed = json::array();
    for (std::size_t i = 0; i < model.n; ++i)
        if (model.fixed[i] >= 0) fixed.push_back({{"i", i}, {"value", static_cast<int>(model.fixed[i])}});
    return {{"n", model.n},
            {"side", model.side},
            {"linear", model.linear},
            {"pairwise", std::move(pairs)},
            {"constant", model.constant},
            {"window", model.window ? json{{"min_cells", model.window->min_cells}, {"max_cells", model.window->max_cells}}
                                    : json(nullptr)},
            {"fixed", std::move(fixed)}};
}

LoadedGeofence geofence_from_json(const json& j) {
    const auto kind = get_or<std::string>(j, "kind", "");
    if (kind == "discrete") {
        const auto spec = grid_spec_from_json(j.at("grid"));
        auto x = selection_from_rows(j.at("x"));
        require(x.side() == spec.side(), "selection does not match the grid");
        return {Geofence{DiscreteGeofence{spec, std::move(x)}}, spec.bbox};
    }
    if (kind == "circular") {
        require(j.contains("bbox"), "circular geofence document lacks a bbox");
        CircularGeofence g{get_or<double>(j, "cx", 0.0), get_or<double>(j, "cy", 0.0), get_or<double>(j, "r", 0.0)};
        require(g.r > 0.0, "circular geofence radius must be positive");
        return {Geofence{g}, bbox_from_json(j.at("bbox"))};
    }
    fail(ErrorKind::invalid_argument, "geofence document must have kind 'discrete' or 'circular'");
}

Weights weights_from_json(const json& j, Weights base) {
    if (j.is_null()) return base;
    require(j.is_object(), "weights must be an object");
    base.a_area = get_or(j, "a_area", base.a_area);
    base.a_cover = get_or(j, "a_cover", base.a_cover);
    base.a_2dw = get_or(j, "a_2dw", base.a_2dw);
    base.a_ng = get_or(j, "a_ng", base.a_ng);
    base.alpha = get_or(j, "alpha", base.alpha);
    base.sigma = get_or(j, "sigma", base.sigma);
    base.validate();
    return base;
}

ModelFlags flags_from_json(const json& j, int side) {
    ModelFlags flags;
    if (j.is_null()) return flags;
    require(j.is_object(), "flags must be an object");
    flags.poi_hard = get_or(j, "poi_hard", false);
    if (j.contains("dw_directions")) {
        const auto& dirs = j.at("dw_directions");
        if (dirs.is_string()) {
            flags.dw_directions = parse_directions(dirs.get<std::string>());
        } else {
            require(dirs.is_array(), "dw_directions must be a list");
            std::string csv;
            for (const auto& d : dirs) {
                require(d.is_string(), "dw_directions entries must be strings");
                csv += d.get<std::string>() + ",";
            }
            flags.dw_directions = parse_directions(csv);
        }
    }
    if (j.contains("forbidden_cells")) {
        const auto& cells = j.at("forbidden_cells");
        require(cells.is_array(), "forbidden_cells must be a list");
        const auto n = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
        for (const auto& c : cells) {
            std::size_t idx = 0;
            if (c.is_array() && c.size() == 2 && c[0].is_number_integer() && c[1].is_number_integer()) {
                const int r = c[0].get<int>(), col = c[1].get<int>();
                require(r >= 0 && col >= 0 && r < side && col < side, "forbidden cell outside the grid");
                idx = static_cast<std::size_t>(r) * side + col;
            } else {
                require(c.is_number_integer() && c.get<std::int64_t>() >= 0, "forbidden cells must be [row, col] pairs or flat indices");
                idx = c.get<std::size_t>();
            }
            require(idx < n, "forbidden cell outside the grid");
            flags.forbidden_cells.push_back(idx);
        }
    }
    return flags;
}

AnnealSchedule schedule_from_json(const json& j, AnnealSchedule base) {
    if (j.is_null()) return base;
    require(j.is_object(), "schedule must be an object");
    base.sweeps = get_or(j, "sweeps", base.sweeps);
    base.t_start = get_or(j, "t_start", base.t_start);
    base.t_end = get_or(j, "t_end", base.t_end);
    base.restarts = get_or(j, "restarts", base.restarts);
    base.polish = get_or(j, "polish", base.polish);
    base.validate();
    return base;
}

synth::SynthConfig synth_config_from_json(const json& j) {
    require(j.is_object(), "synth config must be an object");
    synth::SynthConfig c;
    if (j.contains("preset")) c = synth::preset(get_or<std::string>(j, "preset", ""));
    c.n = get_or(j, "n", c.n);
    c.thin_p = get_or(j, "thin_p", c.thin_p);
    c.m = get_or(j, "m", c.m);
    c.noise_std = get_or(j, "noise_std", c.noise_std);
    c.k_pois = get_or(j, "k_pois", c.k_pois);
    c.seed = get_or(j, "seed", c.seed);
    c.points_per_edge = get_or(j, "points_per_edge", c.points_per_edge);
    c.validate();
    return c;
}

void write_trajectories(std::ostream& out, const TrajectorySet& data) {
    char buf[96];
    for (const auto& t : data.trajectories)
        for (const auto& p : t.points) {
            std::snprintf(buf, sizeof buf, ",%.17g,%.17g,%.17g\n", p.t, p.x, p.y);
            out << t.uid << buf;
        }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io, "cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorKind::parse, "invalid JSON in '" + path + "': " + e.what());
    }
}

}  // namespace geofence::io
