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

#include <sstream>

#include "geofence/error.hpp"
#include "geofence/ingest.hpp"

using namespace geofence;
using Catch::Approx;

namespace {

TrajectorySet parse(const std::string& text, CsvOptions opt = {}) {
    std::istringstream in(text);
    return parse_trajectories(in, opt);
}

}  // namespace

TEST_CASE("parse groups by uid and orders points by time") {
    const auto set = parse("b,2,1,1\na,5,0,0\nb,1,2,2\na,3,1,0\n");
    REQUIRE(set.users() == 2);
    REQUIRE(set.total_points() == 4);
    CHECK(set.trajectories[0].uid == "a");
    CHECK(set.trajectories[0].points[0].t == 3.0);
    CHECK(set.trajectories[1].points[0].x == 2.0);
}

TEST_CASE("parse reports the offending line") {
    try {
        parse("u,0,0,0\nu,1,x,0\n");
        FAIL("expected a parse error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::parse);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(parse("u,0,0\n"), Error);
}

TEST_CASE("header and ISO timestamps") {
    CsvOptions opt;
    opt.header = true;
    opt.iso_time = true;
    const auto set = parse("uid,t,x,y\nu,1970-01-01T00:01:00Z,0,0\nu,1970-01-01T00:00:30.5Z,1,1\n", opt);
    REQUIRE(set.total_points() == 2);
    CHECK(set.trajectories[0].points[0].t == Approx(30.5));
    CHECK(parse_iso8601("2008-10-23T02:53:04Z").value() == Approx(1224730384.0));
    CHECK_FALSE(parse_iso8601("2008-13-01T00:00:00Z"));
    CHECK_FALSE(parse_iso8601("yesterday"));
}

TEST_CASE("latlon projection keeps local distances") {
    CsvOptions opt;
    opt.latlon = true;
    const auto set = parse("u,0,116.30,39.99\nu,1,116.30,40.00\n", opt);
    const auto& p = set.trajectories[0].points;
    CHECK(std::hypot(p[1].x - p[0].x, p[1].y - p[0].y) == Approx(1111.95).epsilon(1e-3));
}

TEST_CASE("region and min-points filters") {
    const auto set = parse("a,0,0,0\na,1,3,0\nb,0,0.5,0\nc,0,10,10\n");
    const auto region = filter_region(set, {0, 0}, 3.0);
    CHECK(region.users() == 2);
    CHECK(region.total_points() == 2);  // boundary point excluded
    CHECK(filter_min_points(set, 2).users() == 1);
}

TEST_CASE("normalization maps the extent onto the unit square") {
    const auto set = parse("a,0,2,10\na,1,6,30\n");
    const auto [unit, bbox] = normalize(set);
    CHECK(unit.trajectories[0].points[0].x == 0.0);
    CHECK(unit.trajectories[0].points[1].x == 1.0);
    CHECK(unit.trajectories[0].points[1].y == 1.0);
    const auto back = from_unit(to_unit({3.3, 17.0}, bbox), bbox);
    CHECK(back.x == Approx(3.3));
    CHECK(back.y == Approx(17.0));
}

TEST_CASE("binning is half-open with a closed last bin") {
    CHECK(bin_of(0.0, 4) == 0);
    CHECK(bin_of(0.25, 4) == 1);
    CHECK(bin_of(0.2499, 4) == 0);
    CHECK(bin_of(1.0, 4) == 3);
    CHECK(unit_to_cell({1.0, 0.0}, 2) == PoiCell{0, 3});
}

TEST_CASE("density counts distinct users per cell") {
    // user a has three points in one cell, b one point in the same cell and one elsewhere
    const auto set = parse("a,0,0.1,0.1\na,1,0.12,0.1\na,2,0.1,0.11\nb,0,0.1,0.1\nb,1,0.9,0.9\n");
    const auto counts = user_counts(set, 1);
    CHECK(counts(0, 0) == 2);
    CHECK(counts(1, 1) == 1);
    const auto m = discretize(set, 1, DensityScale::max_cell);
    CHECK(m.values(0, 0) == 1.0);
    CHECK(m.values(1, 1) == 0.5);
    const auto u = discretize(set, 1, DensityScale::user_count);
    CHECK(u.values(1, 1) == 0.5);
    CHECK(m.values(0, 1) == 0.0);
}
