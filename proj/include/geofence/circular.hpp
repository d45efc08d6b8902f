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

#include <cstdint>

#include "geofence/ingest.hpp"

namespace geofence {

/// Circle in normalized coordinates.
struct CircularGeofence {
    double cx = 0.0;
    double cy = 0.0;
    double r = 0.0;
};

struct CircularParams {
    double cr_limit = 0.5;  // minimum user coverage
    double mu = 10.0;       // penalty coefficient for missing coverage
    double r_min = 1e-6;
    double r_max = 0.7071067811865476;  // half the unit diagonal
    int population = 64;
    int generations = 300;
    double crossover = 0.9;
    double scale = 0.8;  // differential weight
    std::uint64_t seed = 0;
    // Flips the optimization sense to maximization of f + g_mincover.
    bool maximize = false;
};

struct CircularResult {
    CircularGeofence geofence;
    double objective = 0.0;
    double coverage = 0.0;
    std::uint64_t evaluations = 0;
};

/// Mean of the minimum and maximum distance between the POI and the circle: max(d, r).
double distance_objective(const CircularGeofence& g, Point2 poi);

/// Fraction of users with at least one point strictly inside the circle.
double user_coverage(const CircularGeofence& g, const TrajectorySet& data);

/// mu * max(0, cr_limit - coverage).
double min_coverage_penalty(const CircularGeofence& g, const TrajectorySet& data, double cr_limit, double mu);

/// distance_objective + min_coverage_penalty.
double circular_objective(const CircularGeofence& g, const TrajectorySet& data, Point2 poi,
                          const CircularParams& params);

/// Differential evolution over (cx, cy, r) in [0,1]^2 x [r_min, r_max], minimizing
/// circular_objective. Deterministic for a fixed seed.
CircularResult optimize_circular(const TrajectorySet& data, Point2 poi, const CircularParams& params = {});

/// Maximize user coverage with r constrained to [r_star - epsilon, r_star + epsilon].
/// Ties in coverage are broken towards smaller distance_objective.
CircularResult optimize_cover_oriented(const TrajectorySet& data, Point2 poi, double r_star, double epsilon = 0.01,
                                       const CircularParams& params = {});

}  // namespace geofence
