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

#include <optional>
#include <string>

#include "geofence/circular.hpp"
#include "geofence/evaluation.hpp"
#include "geofence/ingest.hpp"
#include "geofence/model.hpp"
#include "geofence/solvers.hpp"

// Request-level composition shared by the CLI and the HTTP service, so both paths
// produce the same results for the same configuration.
namespace geofence::pipeline {

struct DataOptions {
    CsvOptions csv{};
    std::optional<std::size_t> min_points;
    std::optional<Point2> region_center;
    std::optional<double> region_radius;
};

struct PreparedData {
    TrajectorySet source;      // filtered, source units
    TrajectorySet normalized;  // unit square
    BBox bbox;
};

/// Region filter, then min-points filter, then normalization.
PreparedData prepare(TrajectorySet raw, const DataOptions& options);

enum class SolverKind { exact, anneal, hier, automatic };

SolverKind parse_solver(const std::string& name);
std::string to_string(SolverKind kind);

struct DiscreteRequest {
    int d = 4;
    Point2 poi{};  // source units
    Weights weights{};
    bool use_window = true;
    double area_min_pct = 0.0;
    double area_max_pct = 15.0;
    ModelFlags flags{};
    SolverKind solver = SolverKind::anneal;
    AnnealSchedule schedule{};  // schedule.seed is the request seed
    int d_coarse = 0;           // 0 selects max(1, d - 2)
    DensityScale scale = DensityScale::max_cell;

    void validate() const;
};

struct DiscreteOutcome {
    GridSpec spec;
    PoiCell poi;
    std::optional<AreaWindow> window;
    SolveResult result;
    CoverageReport coverage;
};

/// Model for the request at level d. Throws Error(infeasible) when the window cannot be met.
QuadraticModel build_request_model(const PreparedData& data, const DiscreteRequest& request);

DiscreteOutcome run_discrete(const PreparedData& data, const DiscreteRequest& request);

struct CircularRequest {
    Point2 poi{};  // source units
    CircularParams params{};
    bool cover_oriented = false;
    double r_star = 0.0;  // normalized units; 0 with cover_oriented uses the min-cover optimum radius
    double epsilon = 0.01;
};

struct CircularOutcome {
    BBox bbox;
    Point2 poi_unit;
    CircularResult result;
    CoverageReport coverage;
};

CircularOutcome run_circular(const PreparedData& data, const CircularRequest& request);

/// Source-unit point at the center of a cell.
Point2 cell_center(PoiCell cell, const GridSpec& spec);

}  // namespace geofence::pipeline
