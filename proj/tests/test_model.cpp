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

#include "geofence/error.hpp"
#include "geofence/model.hpp"
#include "oracle.hpp"

using namespace geofence;
using Catch::Approx;

TEST_CASE("directions parse and dedupe") {
    const auto dirs = parse_directions("RD, lu,RD");
    REQUIRE(dirs.size() == 2);
    CHECK(dirs[1] == Direction::LU);
    CHECK_THROWS_AS(parse_directions(""), Error);
    CHECK_THROWS_AS(parse_direction("UP"), Error);
}

TEST_CASE("window from percentages") {
    CHECK(window_from_percent(0, 15, 256) == AreaWindow{0, 38});
    CHECK(window_from_percent(12, 15, 256) == AreaWindow{31, 38});
    CHECK(window_from_percent(15, 15, 16) == AreaWindow{2, 2});
    CHECK(window_from_percent(14, 15, 16) == AreaWindow{2, 2});
}

TEST_CASE("domain wall values") {
    const std::vector<Direction> rdlu{Direction::RD, Direction::LU};
    Selection x(4, 0);
    CHECK(domain_wall_term(x, rdlu) == 0.0);
    x(1, 1) = 1;
    CHECK(domain_wall_term(x, rdlu) == 6.0);
    Selection corner(4, 0);
    corner(0, 0) = 1;
    CHECK(domain_wall_term(corner, rdlu) == 3.0);
    CHECK(domain_wall_term(Selection(4, 1), rdlu) == 0.0);
}

TEST_CASE("cover weights decay with Manhattan distance") {
    const auto c = cover_weights(4, {1, 1}, 0.5);
    CHECK(c(1, 1) == 1.0);
    CHECK(c(1, 2) == Approx(1 / std::sqrt(2.0)));
    CHECK(c(3, 3) == Approx(1 / std::sqrt(5.0)));
}

TEST_CASE("compiled energy matches the direct terms") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 200; ++k) {
        const auto in = oracle::random_instance(rng, 1 << (1 + k % 3));
        const auto model = oracle::to_model(in);
        Selection x(in.side, 0);
        for (std::size_t i = 0; i < x.size(); ++i)
            x[i] = static_cast<std::uint8_t>(in.fixed[i] >= 0 ? in.fixed[i] : static_cast<int>(rng() & 1U));
        const double direct = oracle::objective(oracle::to_bits(x), in);
        CHECK(model.energy(x) == Approx(direct).margin(1e-9));
        CHECK(evaluate(model, x).direct_total == Approx(direct).margin(1e-9));
    }
}

TEST_CASE("exhaustive check at L=2") {
    Grid<double> v(2, 0.0);
    v[0] = 1.0;
    v[1] = 0.4;
    v[3] = 0.7;
    Weights w;
    const auto model = build_model(v, {0, 0}, w, std::nullopt);
    oracle::Instance in;
    in.side = 2;
    in.density = {1.0, 0.4, 0.0, 0.7};
    in.a_area = w.a_area;
    in.a_cover = w.a_cover;
    in.a_2dw = w.a_2dw;
    in.a_ng = w.a_ng;
    in.dirs = {Direction::RD, Direction::LU};
    in.fixed.assign(4, -1);
    for (unsigned m = 0; m < 16; ++m) {
        Selection x(2, 0);
        for (unsigned i = 0; i < 4; ++i) x[i] = static_cast<std::uint8_t>((m >> i) & 1U);
        CHECK(model.energy(x) == Approx(oracle::objective(oracle::to_bits(x), in)).margin(1e-12));
    }
}

TEST_CASE("window disables the area term") {
    Grid<double> v(2, 0.5);
    Weights w;
    w.a_area = 3.0;
    const auto free_model = build_model(v, {0, 0}, w, std::nullopt);
    const auto window_model = build_model(v, {0, 0}, w, AreaWindow{0, 2});
    Selection x(2, 0);
    x[0] = 1;
    CHECK(free_model.energy(x) - window_model.energy(x) == Approx(3.0));
}

TEST_CASE("flags fix cells and reject contradictions") {
    Grid<double> v(2, 0.5);
    ModelFlags flags;
    flags.poi_hard = true;
    flags.forbidden_cells = {3};
    const auto model = build_model(v, {0, 0}, {}, std::nullopt, flags);
    CHECK(model.fixed[0] == 1);
    CHECK(model.fixed[3] == 0);
    CHECK(model.free_count() == 2);
    Selection bad(2, 0);
    CHECK_FALSE(is_feasible(model, bad));
    CHECK_THROWS_AS(evaluate(model, bad), Error);
    flags.forbidden_cells = {0};
    CHECK_THROWS_AS(build_model(v, {0, 0}, {}, std::nullopt, flags), Error);
    CHECK_THROWS_AS(build_model(v, {0, 0}, {}, AreaWindow{3, 2}), Error);
}

TEST_CASE("invalid weights are rejected") {
    Grid<double> v(2, 0.5);
    Weights w;
    w.sigma = 0.0;
    CHECK_THROWS_AS(build_model(v, {0, 0}, w, std::nullopt), Error);
    w = {};
    w.a_cover = -1.0;
    CHECK_THROWS_AS(build_model(v, {0, 0}, w, std::nullopt), Error);
}
