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

#include "geofence/evaluation.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace geofence {

namespace {

struct InsideTest {
    const Geofence& g;

    bool operator()(Point2 p) const {
        if (const auto* c = std::get_if<CircularGeofence>(&g)) return std::hypot(p.x - c->cx, p.y - c->cy) < c->r;
        const auto& d = std::get<DiscreteGeofence>(g);
        if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) return false;
        const auto cell = unit_to_cell(p, d.spec.d);
        return d.x(cell.row, cell.col) != 0;
    }
};

void check_geofence(const Geofence& g) {
    if (const auto* d = std::get_if<DiscreteGeofence>(&g))
        require(d->x.side() == d->spec.side(), "discrete geofence selection does not match its grid");
}

}  // namespace

std::string kind_name(const Geofence& g) {
    return std::holds_alternative<CircularGeofence>(g) ? "circular" : "discrete";
}

bool point_inside(const Geofence& g, Point2 normalized) {
    return InsideTest{g}(normalized);
}

double ucr(const Geofence& g, const TrajectorySet& normalized) {
    require(!normalized.empty(), "UCR needs a non-empty trajectory set");
    check_geofence(g);
    const InsideTest inside{g};
    std::size_t covered = 0;
    for (const auto& t : normalized.trajectories)
        for (const auto& p : t.points)
            if (inside({p.x, p.y})) {
                ++covered;
                break;
            }
    return static_cast<double>(covered) / static_cast<double>(normalized.users());
}

Upcr upcr(const Geofence& g, const TrajectorySet& normalized) {
    require(!normalized.empty(), "UPCR needs a non-empty trajectory set");
    check_geofence(g);
    const InsideTest inside{g};
    Upcr out;
    out.per_user.reserve(normalized.users());
    for (const auto& t : normalized.trajectories) {
        require(!t.points.empty(), "UPCR needs every user to have at least one point");
        std::size_t hit = 0;
        for (const auto& p : t.points) hit += inside({p.x, p.y}) ? 1 : 0;
        out.per_user.push_back({t.uid, static_cast<double>(hit) / static_cast<double>(t.points.size())});
    }
    const double n = static_cast<double>(out.per_user.size());
    for (const auto& u : out.per_user) out.mean += u.fraction;
    out.mean /= n;
    double var = 0.0;
    for (const auto& u : out.per_user) var += (u.fraction - out.mean) * (u.fraction - out.mean);
    out.std = std::sqrt(var / n);
    return out;
}

CoverageReport coverage_report(const Geofence& g, const TrajectorySet& normalized) {
    auto u = upcr(g, normalized);
    return {kind_name(g), ucr(g, normalized), u.mean, u.std, std::move(u.per_user)};
}

Overlap overlap(const DiscreteGeofence& a, const DiscreteGeofence& b) {
    if (!(a.spec == b.spec) || a.x.side() != b.x.side())
        fail(ErrorKind::invalid_argument, "overlap needs geofences on the same grid");
    std::size_t inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.x.size(); ++i) {
        inter += (a.x[i] && b.x[i]) ? 1 : 0;
        uni += (a.x[i] || b.x[i]) ? 1 : 0;
    }
    return {inter, uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni)};
}

ComparisonReport compare_report(const std::vector<CircularGeofence>& circular,
                                const std::vector<DiscreteGeofence>& discrete, const TrajectorySet& normalized) {
    require(!circular.empty() && !discrete.empty(), "comparison needs at least one geofence of each kind");
    ComparisonReport out;
    for (const auto& c : circular) out.circular.push_back(coverage_report(Geofence{c}, normalized));
    for (const auto& d : discrete) out.discrete.push_back(coverage_report(Geofence{d}, normalized));
    for (std::size_t j = 0; j < out.discrete.size(); ++j) {
        const auto& circ = out.circular[std::min(j, out.circular.size() - 1)];
        const auto& disc = out.discrete[j];
        std::vector<ScatterPoint> series;
        series.reserve(disc.per_user.size());
        for (std::size_t u = 0; u < disc.per_user.size(); ++u)
            series.push_back({disc.per_user[u].uid, circ.per_user[u].fraction, disc.per_user[u].fraction});
        out.scatter.push_back(std::move(series));
    }
    return out;
}

std::string scatter_csv(const ComparisonReport& report) {
    std::ostringstream os;
    os << "series,uid,circular,discrete\n";
    char buf[64];
    for (std::size_t s = 0; s < report.scatter.size(); ++s)
        for (const auto& p : report.scatter[s]) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g", p.circular, p.discrete);
            os << s << ',' << p.uid << ',' << buf << '\n';
        }
    return os.str();
}

}  // namespace geofence
