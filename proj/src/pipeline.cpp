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

#include "geofence/pipeline.hpp"

#include <algorithm>

namespace geofence::pipeline {

PreparedData prepare(TrajectorySet raw, const DataOptions& options) {
    if (options.region_center || options.region_radius) {
        require(options.region_center && options.region_radius, "region filter needs both a center and a radius");
        raw = filter_region(raw, *options.region_center, *options.region_radius);
    }
    if (options.min_points) raw = filter_min_points(raw, *options.min_points);
    if (raw.empty()) fail(ErrorKind::parse, "no trajectories left after filtering");
    auto [normalized, bbox] = normalize(raw);
    return {std::move(raw), std::move(normalized), bbox};
}

SolverKind parse_solver(const std::string& name) {
    if (name == "exact") return SolverKind::exact;
    if (name == "anneal") return SolverKind::anneal;
    if (name == "hier") return SolverKind::hier;
    if (name == "auto") return SolverKind::automatic;
    fail(ErrorKind::invalid_argument, "unknown solver '" + name + "' (expected exact, anneal, hier or auto)");
}

std::string to_string(SolverKind kind) {
    switch (kind) {
        case SolverKind::exact: return "exact";
        case SolverKind::anneal: return "anneal";
        case SolverKind::hier: return "hier";
        case SolverKind::automatic: return "auto";
    }
    return "?";
}

void DiscreteRequest::validate() const {
    require(d >= 1 && d <= 10, "d must be in [1, 10]");
    weights.validate();
    require(area_min_pct >= 0.0 && area_max_pct <= 100.0 && area_min_pct <= area_max_pct,
            "area percentages must satisfy 0 <= min <= max <= 100");
    require(!flags.dw_directions.empty(), "domain-wall direction set must be non-empty");
    schedule.validate();
    if (solver == SolverKind::hier) {
        require(use_window, "hierarchical solving needs an area window");
        require(d_coarse == 0 || (d_coarse >= 1 && d_coarse < d), "d_coarse must be in [1, d)");
        require(d >= 2, "hierarchical solving needs d >= 2");
    }
}

Point2 cell_center(PoiCell cell, const GridSpec& spec) {
    const double side = spec.side();
    return from_unit({(cell.col + 0.5) / side, (cell.row + 0.5) / side}, spec.bbox);
}

QuadraticModel build_request_model(const PreparedData& data, const DiscreteRequest& request) {
    request.validate();
    const auto grid = discretize(data.normalized, request.d, request.scale, data.bbox);
    const auto poi = poi_to_cell(request.poi, data.bbox, request.d);
    std::optional<AreaWindow> window;
    if (request.use_window) window = window_from_percent(request.area_min_pct, request.area_max_pct, grid.spec.cells());
    auto model = build_model(grid.values, poi, request.weights, window, request.flags);
    check_window_reachable(model);
    return model;
}

DiscreteOutcome run_discrete(const PreparedData& data, const DiscreteRequest& request) {
    request.validate();
    DiscreteOutcome out;
    const auto grid = discretize(data.normalized, request.d, request.scale, data.bbox);
    out.spec = grid.spec;
    out.poi = poi_to_cell(request.poi, data.bbox, request.d);
    if (request.use_window)
        out.window = window_from_percent(request.area_min_pct, request.area_max_pct, grid.spec.cells());

    if (request.solver == SolverKind::hier) {
        HierarchicalConfig config;
        config.d_fine = request.d;
        config.d_coarse = request.d_coarse > 0 ? request.d_coarse : std::max(1, request.d - 2);
        config.area_min_pct = request.area_min_pct;
        config.area_max_pct = request.area_max_pct;
        config.weights = request.weights;
        config.flags = request.flags;
        config.schedule = request.schedule;
        const auto coarse = discretize(data.normalized, config.d_coarse, request.scale, data.bbox);
        out.result = solve_hierarchical(coarse.values, grid.values, out.poi, config).fine;
    } else {
        const auto model = build_model(grid.values, out.poi, request.weights, out.window, request.flags);
        switch (request.solver) {
            case SolverKind::exact: out.result = solve_exact(model); break;
            case SolverKind::anneal: out.result = solve_anneal(model, request.schedule); break;
            default: out.result = solve_auto(model, request.schedule); break;
        }
    }
    out.coverage = coverage_report(Geofence{DiscreteGeofence{out.spec, out.result.x}}, data.normalized);
    return out;
}

CircularOutcome run_circular(const PreparedData& data, const CircularRequest& request) {
    CircularOutcome out;
    out.bbox = data.bbox;
    out.poi_unit = to_unit(request.poi, data.bbox);
    require(data.bbox.contains(request.poi.x, request.poi.y), "POI lies outside the data bounding box");
    if (request.cover_oriented) {
        double r_star = request.r_star;
        if (r_star <= 0.0) r_star = optimize_circular(data.normalized, out.poi_unit, request.params).geofence.r;
        out.result = optimize_cover_oriented(data.normalized, out.poi_unit, r_star, request.epsilon, request.params);
    } else {
        out.result = optimize_circular(data.normalized, out.poi_unit, request.params);
    }
    out.coverage = coverage_report(Geofence{out.result.geofence}, data.normalized);
    return out;
}

}  // namespace geofence::pipeline
