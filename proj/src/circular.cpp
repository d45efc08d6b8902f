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

#include "geofence/circular.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace geofence {

namespace {

using Candidate = std::array<double, 3>;  // cx, cy, r

struct Bounds {
    Candidate lo;
    Candidate hi;
};

// Strict d < r, decided by hypot only near the boundary.
bool strictly_inside(double dx, double dy, double r) {
    const double d2 = dx * dx + dy * dy;
    const double r2 = r * r;
    if (d2 < r2 * (1.0 - 1e-12)) return true;
    if (d2 > r2 * (1.0 + 1e-12)) return false;
    return std::hypot(dx, dy) < r;
}

// Smallest distance from each user's points to (cx, cy), sorted ascending.
std::vector<double> sorted_user_distances(const TrajectorySet& data, double cx, double cy) {
    std::vector<double> out;
    out.reserve(data.users());
    for (const auto& t : data.trajectories) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& p : t.points) best = std::min(best, std::hypot(p.x - cx, p.y - cy));
        out.push_back(best);
    }
    std::sort(out.begin(), out.end());
    return out;
}

// rand/1/bin differential evolution. Trial vectors for a whole generation are drawn
// before any evaluation, so the random sequence does not depend on evaluation order.
std::pair<Candidate, double> differential_evolution(const std::function<double(const Candidate&)>& objective,
                                                    const Bounds& bounds, const std::vector<Candidate>& seeds,
                                                    const CircularParams& params, std::uint64_t& evaluations) {
    require(params.population >= 4, "population must be at least 4");
    require(params.generations >= 0, "generations must be non-negative");
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int np = params.population;

    std::vector<Candidate> pop(np);
    std::vector<double> fit(np);
    for (int i = 0; i < np; ++i) {
        for (int k = 0; k < 3; ++k) pop[i][k] = bounds.lo[k] + unit(rng) * (bounds.hi[k] - bounds.lo[k]);
    }
    for (std::size_t s = 0; s < seeds.size() && s < pop.size(); ++s) pop[s] = seeds[s];
    for (int i = 0; i < np; ++i) {
        fit[i] = objective(pop[i]);
        ++evaluations;
    }

    std::uniform_int_distribution<int> pick(0, np - 1);
    std::uniform_int_distribution<int> pick_dim(0, 2);
    std::vector<Candidate> trials(np);
    for (int gen = 0; gen < params.generations; ++gen) {
        for (int i = 0; i < np; ++i) {
            int a, b, c;
            do a = pick(rng); while (a == i);
            do b = pick(rng); while (b == i || b == a);
            do c = pick(rng); while (c == i || c == a || c == b);
            const int forced = pick_dim(rng);
            Candidate trial = pop[i];
            for (int k = 0; k < 3; ++k) {
                const double u = unit(rng);
                if (k == forced || u < params.crossover) {
                    double v = pop[a][k] + params.scale * (pop[b][k] - pop[c][k]);
                    // Reflect-free repair: resample uniformly between parent and violated bound.
                    if (v < bounds.lo[k]) v = bounds.lo[k] + unit(rng) * (pop[i][k] - bounds.lo[k]);
                    if (v > bounds.hi[k]) v = bounds.hi[k] - unit(rng) * (bounds.hi[k] - pop[i][k]);
                    trial[k] = std::clamp(v, bounds.lo[k], bounds.hi[k]);
                }
            }
            trials[i] = trial;
        }
        for (int i = 0; i < np; ++i) {
            const double f = objective(trials[i]);
            ++evaluations;
            if (f <= fit[i]) {
                pop[i] = trials[i];
                fit[i] = f;
            }
        }
    }
    int best = 0;
    for (int i = 1; i < np; ++i)
        if (fit[i] < fit[best]) best = i;
    if (!std::isfinite(fit[best])) fail(ErrorKind::infeasible, "no finite-objective circular geofence found");
    return {pop[best], fit[best]};
}

}  // namespace

double distance_objective(const CircularGeofence& g, Point2 poi) {
    const double d = std::hypot(poi.x - g.cx, poi.y - g.cy);
    return 0.5 * (d + g.r + std::abs(d - g.r));
}

double user_coverage(const CircularGeofence& g, const TrajectorySet& data) {
    require(!data.empty(), "user coverage needs a non-empty trajectory set");
    std::size_t covered = 0;
    for (const auto& t : data.trajectories) {
        for (const auto& p : t.points) {
            if (strictly_inside(p.x - g.cx, p.y - g.cy, g.r)) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(data.users());
}

double min_coverage_penalty(const CircularGeofence& g, const TrajectorySet& data, double cr_limit, double mu) {
    if (mu == 0.0) return 0.0;
    return mu * std::max(0.0, cr_limit - user_coverage(g, data));
}

double circular_objective(const CircularGeofence& g, const TrajectorySet& data, Point2 poi,
                          const CircularParams& params) {
    return distance_objective(g, poi) + min_coverage_penalty(g, data, params.cr_limit, params.mu);
}

CircularResult optimize_circular(const TrajectorySet& data, Point2 poi, const CircularParams& params) {
    require(!data.empty(), "circular optimization needs a non-empty trajectory set");
    require(params.cr_limit >= 0.0 && params.cr_limit <= 1.0, "cr_limit must be in [0,1]");
    require(params.mu >= 0.0, "mu must be non-negative");
    require(params.r_min > 0.0 && params.r_max >= params.r_min, "radius bounds must satisfy 0 < r_min <= r_max");
    const double sense = params.maximize ? -1.0 : 1.0;

    auto objective = [&](const Candidate& c) {
        return sense * circular_objective({c[0], c[1], c[2]}, data, poi, params);
    };
    const Bounds bounds{{0.0, 0.0, params.r_min}, {1.0, 1.0, params.r_max}};
    const Candidate start{std::clamp(poi.x, 0.0, 1.0), std::clamp(poi.y, 0.0, 1.0), params.r_max};

    CircularResult result;
    auto [best, value] = differential_evolution(objective, bounds, {start}, params, result.evaluations);

    // For the best center, the objective in r is piecewise: coverage only changes right
    // after a user's closest distance, so the exact best radius is among those breakpoints.
    const auto dists = sorted_user_distances(data, best[0], best[1]);
    std::vector<double> radii{params.r_min, params.r_max,
                              std::clamp(std::hypot(poi.x - best[0], poi.y - best[1]), params.r_min, params.r_max)};
    for (double d : dists) {
        const double r = std::nextafter(d, std::numeric_limits<double>::infinity());
        if (r >= params.r_min && r <= params.r_max) radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end());
    for (double r : radii) {
        const double v = objective({best[0], best[1], r});
        ++result.evaluations;
        if (v < value) {
            value = v;
            best[2] = r;
        }
    }

    result.geofence = {best[0], best[1], best[2]};
    result.objective = sense * value;
    result.coverage = user_coverage(result.geofence, data);
    return result;
}

CircularResult optimize_cover_oriented(const TrajectorySet& data, Point2 poi, double r_star, double epsilon,
                                       const CircularParams& params) {
    require(!data.empty(), "circular optimization needs a non-empty trajectory set");
    require(epsilon > 0.0, "epsilon must be positive");
    if (!(r_star > epsilon)) fail(ErrorKind::invalid_argument, "infeasible radius window: r_star must exceed epsilon");
    const double lo = r_star - epsilon;
    const double hi = r_star + epsilon;

    // Coverage dominates; the tiny distance term only orders equal-coverage circles.
    constexpr double tie_weight = 1e-9;
    auto objective = [&](const Candidate& c) {
        const CircularGeofence g{c[0], c[1], c[2]};
        return -user_coverage(g, data) + tie_weight * distance_objective(g, poi);
    };
    const Bounds bounds{{0.0, 0.0, lo}, {1.0, 1.0, hi}};
    const Candidate start{std::clamp(poi.x, 0.0, 1.0), std::clamp(poi.y, 0.0, 1.0), r_star};

    CircularResult result;
    auto [best, value] = differential_evolution(objective, bounds, {start}, params, result.evaluations);

    const auto dists = sorted_user_distances(data, best[0], best[1]);
    std::vector<double> radii{lo, hi};
    for (double d : dists) {
        const double r = std::nextafter(d, std::numeric_limits<double>::infinity());
        if (r >= lo && r <= hi) radii.push_back(r);
    }
    std::sort(radii.begin(), radii.end());
    for (double r : radii) {
        const double v = objective({best[0], best[1], r});
        ++result.evaluations;
        if (v < value) {
            value = v;
            best[2] = r;
        }
    }

    result.geofence = {best[0], best[1], best[2]};
    result.coverage = user_coverage(result.geofence, data);
    result.objective = result.coverage;
    return result;
}

}  // namespace geofence
