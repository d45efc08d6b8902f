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

#include "geofence/error.hpp"
#include "geofence/synth.hpp"

using namespace geofence;

TEST_CASE("thinned lattice stays connected") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto g = synth::generate_graph(10, 0.6, seed);
        CHECK(g.connected());
        CHECK(g.edge_count() >= 99);
        CHECK(g.edge_count() <= 180);
    }
    CHECK(synth::generate_graph(6, 0.0, 1).edge_count() == 60);
}

TEST_CASE("trajectories follow shortest paths") {
    const auto g = synth::generate_graph(8, 0.3, 5);
    const auto set = synth::sample_trajectories(g, 30, 0.0, 5, 4);
    REQUIRE(set.users() == 30);
    for (const auto& t : set.trajectories) {
        for (std::size_t k = 1; k < t.points.size(); ++k) {
            const double step = std::hypot(t.points[k].x - t.points[k - 1].x, t.points[k].y - t.points[k - 1].y);
            CHECK(step <= 1.0 / 7.0 / 4.0 + 1e-12);
            CHECK(t.points[k].t == static_cast<double>(k));
        }
    }
}

TEST_CASE("datasets are reproducible from the seed") {
    auto cfg = synth::preset("data1");
    const auto a = synth::build_dataset(cfg);
    const auto b = synth::build_dataset(cfg);
    REQUIRE(a.data.total_points() == b.data.total_points());
    CHECK(a.data.trajectories[7].points[3].x == b.data.trajectories[7].points[3].x);
    CHECK(a.pois.size() == 2);
    cfg.seed = 99;
    const auto c = synth::build_dataset(cfg);
    CHECK(c.data.trajectories[7].points.size() + c.data.total_points() !=
          a.data.trajectories[7].points.size() + a.data.total_points());
    CHECK_THROWS_AS(synth::preset("data9"), Error);
}
