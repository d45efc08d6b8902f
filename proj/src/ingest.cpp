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

#include "geofence/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <numbers>

namespace geofence {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> parse_double(std::string_view s) {
    s = trim(s);
    if (s.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) return std::nullopt;
    return value;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's algorithm).
long long days_from_civil(long long y, unsigned m, unsigned d) {
    y -= m <= 2;
    const long long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<long long>(doe) - 719468;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    fail(ErrorKind::parse, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::size_t TrajectorySet::total_points() const {
    std::size_t n = 0;
    for (const auto& t : trajectories) n += t.points.size();
    return n;
}

std::optional<double> parse_iso8601(const std::string& text) {
    std::string_view s = trim(text);
    if (s.size() < 19) return std::nullopt;
    auto field = [&](std::size_t pos, std::size_t len) -> std::optional<int> {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
        if (ec != std::errc{} || ptr != s.data() + pos + len) return std::nullopt;
        return v;
    };
    if (s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' || s[16] != ':')
        return std::nullopt;
    auto year = field(0, 4), month = field(5, 2), day = field(8, 2);
    auto hour = field(11, 2), minute = field(14, 2), second = field(17, 2);
    if (!year || !month || !day || !hour || !minute || !second) return std::nullopt;
    if (*month < 1 || *month > 12 || *day < 1 || *day > 31 || *hour > 23 || *minute > 59 || *second > 60)
        return std::nullopt;
    double frac = 0.0;
    std::string_view rest = s.substr(19);
    if (!rest.empty() && rest.front() == '.') {
        std::size_t n = 1;
        while (n < rest.size() && rest[n] >= '0' && rest[n] <= '9') ++n;
        if (n == 1) return std::nullopt;
        auto f = parse_double(std::string("0") + std::string(rest.substr(0, n)));
        if (!f) return std::nullopt;
        frac = *f;
        rest.remove_prefix(n);
    }
    if (rest == "Z") rest = {};
    if (!rest.empty()) return std::nullopt;
    const long long days = days_from_civil(*year, static_cast<unsigned>(*month), static_cast<unsigned>(*day));
    return static_cast<double>(days * 86400LL + *hour * 3600LL + *minute * 60LL + *second) + frac;
}

TrajectorySet parse_trajectories(std::istream& in, const CsvOptions& options) {
    if (!in) fail(ErrorKind::io, "unreadable trajectory stream");
    std::map<std::string, std::vector<TrajectoryPoint>> groups;
    std::string line;
    std::size_t lineno = 0;
    bool skip_header = options.header;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        if (skip_header) {
            skip_header = false;
            continue;
        }
        auto cols = split_commas(line);
        if (cols.size() != 4) parse_fail(lineno, "expected 4 columns uid,t,x,y, got " + std::to_string(cols.size()));
        if (cols[0].empty()) parse_fail(lineno, "empty uid");
        TrajectoryPoint p;
        if (options.iso_time) {
            auto t = parse_iso8601(std::string(cols[1]));
            if (!t) parse_fail(lineno, "invalid ISO-8601 timestamp '" + std::string(cols[1]) + "'");
            p.t = *t;
        } else {
            auto t = parse_double(cols[1]);
            if (!t) parse_fail(lineno, "non-numeric timestamp '" + std::string(cols[1]) + "'");
            p.t = *t;
        }
        auto x = parse_double(cols[2]);
        if (!x) parse_fail(lineno, "non-numeric x '" + std::string(cols[2]) + "'");
        auto y = parse_double(cols[3]);
        if (!y) parse_fail(lineno, "non-numeric y '" + std::string(cols[3]) + "'");
        p.x = *x;
        p.y = *y;
        groups[std::string(cols[0])].push_back(p);
    }
    if (in.bad()) fail(ErrorKind::io, "error while reading trajectory stream");
    if (groups.empty()) fail(ErrorKind::parse, "no trajectory rows in input");

    TrajectorySet out;
    out.trajectories.reserve(groups.size());
    for (auto& [uid, points] : groups) {
        std::stable_sort(points.begin(), points.end(),
                         [](const TrajectoryPoint& a, const TrajectoryPoint& b) { return a.t < b.t; });
        out.trajectories.push_back({uid, std::move(points)});
    }
    if (options.latlon) return project_latlon(out);
    return out;
}

TrajectorySet project_latlon(const TrajectorySet& data) {
    require(!data.empty(), "cannot project an empty trajectory set");
    constexpr double earth_radius = 6371008.8;
    constexpr double deg = std::numbers::pi / 180.0;
    double lon0 = 0.0, lat0 = 0.0;
    std::size_t n = 0;
    for (const auto& t : data.trajectories)
        for (const auto& p : t.points) {
            lon0 += p.x;
            lat0 += p.y;
            ++n;
        }
    lon0 /= static_cast<double>(n);
    lat0 /= static_cast<double>(n);
    const double kx = earth_radius * std::cos(lat0 * deg) * deg;
    const double ky = earth_radius * deg;
    TrajectorySet out = data;
    for (auto& t : out.trajectories)
        for (auto& p : t.points) {
            if (p.y < -90.0 || p.y > 90.0 || p.x < -180.0 || p.x > 180.0)
                fail(ErrorKind::parse, "coordinate out of lat/lon range for uid " + t.uid);
            p.x = (p.x - lon0) * kx;
            p.y = (p.y - lat0) * ky;
        }
    return out;
}

TrajectorySet filter_region(const TrajectorySet& data, Point2 center, double radius) {
    require(radius > 0.0 && std::isfinite(radius), "region radius must be positive");
    TrajectorySet out;
    for (const auto& t : data.trajectories) {
        Trajectory kept{t.uid, {}};
        for (const auto& p : t.points)
            if (std::hypot(p.x - center.x, p.y - center.y) < radius) kept.points.push_back(p);
        if (!kept.points.empty()) out.trajectories.push_back(std::move(kept));
    }
    return out;
}

TrajectorySet filter_min_points(const TrajectorySet& data, std::size_t min_points) {
    require(min_points >= 1, "min_points must be at least 1");
    TrajectorySet out;
    for (const auto& t : data.trajectories)
        if (t.points.size() >= min_points) out.trajectories.push_back(t);
    return out;
}

std::pair<TrajectorySet, BBox> normalize(const TrajectorySet& data) {
    require(!data.empty() && data.total_points() > 0, "cannot normalize an empty trajectory set");
    BBox box{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
             -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& t : data.trajectories)
        for (const auto& p : t.points) {
            box.xmin = std::min(box.xmin, p.x);
            box.ymin = std::min(box.ymin, p.y);
            box.xmax = std::max(box.xmax, p.x);
            box.ymax = std::max(box.ymax, p.y);
        }
    require(box.xmax > box.xmin, "x axis has zero extent");
    require(box.ymax > box.ymin, "y axis has zero extent");
    TrajectorySet out = data;
    for (auto& t : out.trajectories)
        for (auto& p : t.points) {
            auto u = to_unit({p.x, p.y}, box);
            p.x = u.x;
            p.y = u.y;
        }
    return {std::move(out), box};
}

Point2 to_unit(Point2 p, const BBox& bbox) {
    // Extremes map exactly onto 0 and 1.
    double ux = p.x == bbox.xmax ? 1.0 : (p.x - bbox.xmin) / bbox.width();
    double uy = p.y == bbox.ymax ? 1.0 : (p.y - bbox.ymin) / bbox.height();
    return {ux, uy};
}

Point2 from_unit(Point2 u, const BBox& bbox) {
    return {bbox.xmin + u.x * bbox.width(), bbox.ymin + u.y * bbox.height()};
}

PoiCell unit_to_cell(Point2 u, int d) {
    const int side = 1 << d;
    return {bin_of(u.y, side), bin_of(u.x, side)};
}

Grid<int> user_counts(const TrajectorySet& normalized, int d) {
    require(d >= 1 && d <= 15, "discretization level must be in [1, 15]");
    const int side = 1 << d;
    Grid<int> counts(side, 0);
    std::vector<std::uint32_t> stamp(counts.size(), 0);
    std::uint32_t user = 0;
    for (const auto& t : normalized.trajectories) {
        ++user;
        for (const auto& p : t.points) {
            if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0))
                fail(ErrorKind::invalid_argument, "coordinate outside [0,1] for uid " + t.uid);
            auto cell = unit_to_cell({p.x, p.y}, d);
            auto idx = static_cast<std::size_t>(cell.row) * side + cell.col;
            if (stamp[idx] != user) {
                stamp[idx] = user;
                ++counts[idx];
            }
        }
    }
    return counts;
}

CellMatrix discretize(const TrajectorySet& normalized, int d, DensityScale scale, const BBox& bbox) {
    auto counts = user_counts(normalized, d);
    CellMatrix out{GridSpec(d, bbox), Grid<double>(counts.side(), 0.0)};
    int peak = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) peak = std::max(peak, counts[i]);
    const double denom = scale == DensityScale::max_cell ? static_cast<double>(peak)
                                                         : static_cast<double>(normalized.users());
    if (denom <= 0.0) return out;
    for (std::size_t i = 0; i < counts.size(); ++i) out.values[i] = counts[i] / denom;
    return out;
}

PoiCell poi_to_cell(Point2 poi, const BBox& bbox, int d) {
    require(d >= 1 && d <= 15, "discretization level must be in [1, 15]");
    if (!bbox.contains(poi.x, poi.y)) fail(ErrorKind::invalid_argument, "POI lies outside the data bounding box");
    return unit_to_cell(to_unit(poi, bbox), d);
}

}  // namespace geofence
