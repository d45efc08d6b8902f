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

#include <random>

#include "geofence/circular.hpp"
#include "geofence/error.hpp"

using namespace geofence;
using Catch::Approx;

namespace {

TrajectorySet two_clusters() {
    TrajectorySet set;
    for (int u = 0; u < 10; ++u) {
        Trajectory t;
        t.uid = "u" + std::to_string(u);
        const double cx = u < 6 ? 0.3 : 0.8;
        for (int k = 0; k < 5; ++k) t.points.push_back({static_cast<double>(k), cx + 0.01 * k, 0.5});
        set.trajectories.push_back(t);
    }
    return set;
}

}  // namespace

TEST_CASE("distance objective is max(distance, radius)") {
    CHECK(distance_objective({0, 0, 0.2}, {0.3, 0.4}) == Approx(0.5));
    CHECK(distance_objective({0, 0, 0.7}, {0.3, 0.4}) == Approx(0.7));
}

TEST_CASE("coverage counts users with a strictly interior point") {
    const auto set = two_clusters();
    CHECK(user_coverage({0.32, 0.5, 0.1}, set) == Approx(0.6));
    CHECK(user_coverage({0.3, 0.5, 0.0}, set) == 0.0);
    CHECK(user_coverage({0.5, 0.5, 1.0}, set) == 1.0);
    CHECK(min_coverage_penalty({0.32, 0.5, 0.1}, set, 0.5, 10) == 0.0);
    CHECK(min_coverage_penalty({0.32, 0.5, 0.1}, set, 0.8, 10) == Approx(2.0));
}

TEST_CASE("optimizer is no worse than a grid scan and deterministic") {
    const auto set = two_clusters();
    const Point2 poi{0.3, 0.5};
    CircularParams p;
    p.seed = 5;
    const auto res = optimize_circular(set, poi, p);
    double best = 1e9;
    for (int i = 0; i <= 40; ++i)
        for (int j = 0; j <= 40; ++j)
            for (int k = 1; k <= 40; ++k)
                best = std::min(best, circular_objective({i / 40.0, j / 40.0, k / 40.0 * p.r_max}, set, poi, p));
    CHECK(res.objective <= best + 1e-12);
    CHECK(res.coverage >= p.cr_limit);
    CHECK(circular_objective(res.geofence, set, poi, p) == Approx(res.objective));
    const auto again = optimize_circular(set, poi, p);
    CHECK(again.geofence.cx == res.geofence.cx);
    CHECK(again.geofence.r == res.geofence.r);
}

TEST_CASE("required coverage grows the radius") {
    const auto set = two_clusters();
    double last = 0.0;
    for (double cr : {0.1, 0.5, 0.9}) {
        CircularParams p;
        p.cr_limit = cr;
        p.seed = 1;
        const auto r = optimize_circular(set, {0.3, 0.5}, p).geofence.r;
        CHECK(r >= last - 1e-9);
        last = r;
    }
}

TEST_CASE("cover-oriented variant stays inside the radius window") {
    const auto set = two_clusters();
    CircularParams p;
    p.seed = 3;
    const auto res = optimize_cover_oriented(set, {0.3, 0.5}, 0.3, 0.01, p);
    CHECK(res.geofence.r >= 0.29 - 1e-12);
    CHECK(res.geofence.r <= 0.31 + 1e-12);
    CHECK(res.coverage == 1.0);
    CHECK_THROWS_AS(optimize_cover_oriented(set, {0.3, 0.5}, 0.005, 0.01, p), Error);
}
