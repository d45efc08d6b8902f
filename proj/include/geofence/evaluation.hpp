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

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "geofence/circular.hpp"
#include "geofence/ingest.hpp"

namespace geofence {

struct DiscreteGeofence {
    GridSpec spec;
    Selection x;
};

/// Either kind of geofence, in normalized coordinates.
using Geofence = std::variant<CircularGeofence, DiscreteGeofence>;

std::string kind_name(const Geofence& g);

struct UserFraction {
    std::string uid;
    double fraction = 0.0;
};

struct CoverageReport {
    std::string geofence_kind;
    double ucr = 0.0;
    double upcr_mean = 0.0;
    double upcr_std = 0.0;
    std::vector<UserFraction> per_user;
};

struct Upcr {
    double mean = 0.0;
    double std = 0.0;  // population standard deviation
    std::vector<UserFraction> per_user;
};

struct Overlap {
    std::size_t intersection_cells = 0;
    double jaccard = 0.0;
};

/// Circular: distance to the center strictly below r. Discrete: the point's cell is selected.
bool point_inside(const Geofence& g, Point2 normalized);

/// Fraction of users with at least one covered point.
double ucr(const Geofence& g, const TrajectorySet& normalized);

/// Per-user covered-point fractions with their mean and population standard deviation.
Upcr upcr(const Geofence& g, const TrajectorySet& normalized);

CoverageReport coverage_report(const Geofence& g, const TrajectorySet& normalized);

Overlap overlap(const DiscreteGeofence& a, const DiscreteGeofence& b);

struct ScatterPoint {
    std::string uid;
    double circular = 0.0;
    double discrete = 0.0;
};

struct ComparisonReport {
    std::vector<CoverageReport> circular;
    std::vector<CoverageReport> discrete;
    /// One series per discrete geofence j, paired with circular geofence min(j, circular.size()-1).
    std::vector<std::vector<ScatterPoint>> scatter;
};

ComparisonReport compare_report(const std::vector<CircularGeofence>& circular,
                                const std::vector<DiscreteGeofence>& discrete, const TrajectorySet& normalized);

/// Scatter CSV: series,uid,circular,discrete.
std::string scatter_csv(const ComparisonReport& report);

}  // namespace geofence
