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

#include "geofence/synth.hpp"

#include <algorithm>
#include <deque>
#include <random>

namespace geofence::synth {

namespace {

std::mt19937_64 stage_rng(std::uint64_t seed, std::uint32_t stage) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stage};
    return std::mt19937_64(seq);
}

}  // namespace

LatticeGraph::LatticeGraph(int n) : n_(n) {
    require(n >= 2, "lattice side must be at least 2");
    adj_.resize(static_cast<std::size_t>(n) * n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
            const int v = vertex(r, c);
            if (c + 1 < n) {
                adj_[v].push_back(vertex(r, c + 1));
                adj_[vertex(r, c + 1)].push_back(v);
                ++edge_count_;
            }
            if (r + 1 < n) {
                adj_[v].push_back(vertex(r + 1, c));
                adj_[vertex(r + 1, c)].push_back(v);
                ++edge_count_;
            }
        }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
}

Point2 LatticeGraph::position(int v) const {
    const double span = static_cast<double>(n_ - 1);
    return {static_cast<double>(v % n_) / span, static_cast<double>(v / n_) / span};
}

std::vector<std::pair<int, int>> LatticeGraph::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int u = 0; u < vertices(); ++u)
        for (int v : adj_[u])
            if (u < v) out.emplace_back(u, v);
    return out;
}

bool LatticeGraph::has_edge(int u, int v) const {
    const auto& a = adj_[static_cast<std::size_t>(u)];
    return std::binary_search(a.begin(), a.end(), v);
}

void LatticeGraph::add_edge(int u, int v) {
    if (has_edge(u, v)) return;
    auto& a = adj_[u];
    a.insert(std::lower_bound(a.begin(), a.end(), v), v);
    auto& b = adj_[v];
    b.insert(std::lower_bound(b.begin(), b.end(), u), u);
    ++edge_count_;
}

void LatticeGraph::remove_edge(int u, int v) {
    if (!has_edge(u, v)) return;
    auto& a = adj_[u];
    a.erase(std::lower_bound(a.begin(), a.end(), v));
    auto& b = adj_[v];
    b.erase(std::lower_bound(b.begin(), b.end(), u));
    --edge_count_;
}

std::vector<int> LatticeGraph::bfs(int source) const {
    std::vector<int> dist(static_cast<std::size_t>(vertices()), -1);
    std::deque<int> queue{source};
    dist[source] = 0;
    while (!queue.empty()) {
        const int u = queue.front();
        queue.pop_front();
        for (int v : adj_[u])
            if (dist[v] < 0) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
    }
    return dist;
}

bool LatticeGraph::connected() const {
    const auto dist = bfs(0);
    return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

void SynthConfig::validate() const {
    require(n >= 2, "synthetic lattice side must be at least 2");
    require(thin_p >= 0.0 && thin_p < 1.0, "thin_p must be in [0, 1)");
    require(m >= 1, "trajectory count must be at least 1");
    require(noise_std >= 0.0, "noise_std must be non-negative");
    require(k_pois >= 1, "at least one POI is required");
    require(points_per_edge >= 1, "points_per_edge must be at least 1");
}

LatticeGraph generate_graph(int n, double thin_p, std::uint64_t seed) {
    require(thin_p >= 0.0 && thin_p < 1.0, "thin_p must be in [0, 1)");
    LatticeGraph g(n);
    if (thin_p == 0.0) return g;
    auto rng = stage_rng(seed, 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto order = g.edges();
    std::shuffle(order.begin(), order.end(), rng);
    for (auto [u, v] : order) {
        if (unit(rng) >= thin_p) continue;
        g.remove_edge(u, v);
        // A bridge leaves v unreachable from u.
        if (g.bfs(u)[v] < 0) g.add_edge(u, v);
    }
    return g;
}

std::vector<Point2> place_pois(int k, std::uint64_t seed, const LatticeGraph& graph) {
    require(k >= 1, "at least one POI is required");
    if (k > graph.vertices()) fail(ErrorKind::invalid_argument, "POI count exceeds the lattice size");
    auto rng = stage_rng(seed, 2);
    std::vector<int> ids(static_cast<std::size_t>(graph.vertices()));
    for (int i = 0; i < graph.vertices(); ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    std::vector<Point2> out;
    for (int i = 0; i < k; ++i) out.push_back(graph.position(ids[i]));
    return out;
}

TrajectorySet sample_trajectories(const LatticeGraph& graph, int m, double noise_std, std::uint64_t seed,
                                  int points_per_edge) {
    require(m >= 1, "trajectory count must be at least 1");
    require(noise_std >= 0.0, "noise_std must be non-negative");
    require(points_per_edge >= 1, "points_per_edge must be at least 1");
    if (!graph.connected()) fail(ErrorKind::invalid_argument, "trajectory sampling needs a connected graph");
    auto rng = stage_rng(seed, 3);
    std::uniform_int_distribution<int> pick_vertex(0, graph.vertices() - 1);
    std::normal_distribution<double> noise(0.0, noise_std > 0.0 ? noise_std : 1.0);

    const int width = static_cast<int>(std::to_string(m - 1).size());
    TrajectorySet out;
    out.trajectories.reserve(static_cast<std::size_t>(m));
    for (int j = 0; j < m; ++j) {
        int origin = pick_vertex(rng);
        int dest = pick_vertex(rng);
        while (dest == origin) dest = pick_vertex(rng);

        const auto dist = graph.bfs(dest);
        std::vector<int> path{origin};
        std::vector<int> next;
        for (int v = origin; v != dest;) {
            next.clear();
            for (int w : graph.neighbors(v))
                if (dist[w] == dist[v] - 1) next.push_back(w);
            v = next[std::uniform_int_distribution<std::size_t>(0, next.size() - 1)(rng)];
            path.push_back(v);
        }

        std::string uid = std::to_string(j);
        uid.insert(0, static_cast<std::size_t>(width) - uid.size(), '0');
        Trajectory traj{uid, {}};
        auto emit = [&](Point2 p) {
            if (noise_std > 0.0) {
                p.x += noise(rng);
                p.y += noise(rng);
            }
            traj.points.push_back({static_cast<double>(traj.points.size()), p.x, p.y});
        };
        for (std::size_t s = 0; s + 1 < path.size(); ++s) {
            const Point2 a = graph.position(path[s]);
            const Point2 b = graph.position(path[s + 1]);
            for (int k = 0; k < points_per_edge; ++k) {
                const double f = static_cast<double>(k) / points_per_edge;
                emit({a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f});
            }
        }
        emit(graph.position(path.back()));
        out.trajectories.push_back(std::move(traj));
    }
    return out;
}

Dataset build_dataset(const SynthConfig& config) {
    config.validate();
    auto graph = generate_graph(config.n, config.thin_p, config.seed);
    Dataset out;
    out.pois = place_pois(config.k_pois, config.seed, graph);
    out.data = sample_trajectories(graph, config.m, config.noise_std, config.seed, config.points_per_edge);
    return out;
}

SynthConfig preset(const std::string& name) {
    SynthConfig c;
    if (name == "data1") {
        c.n = 12;
        c.thin_p = 0.3;
        c.m = 150;
        c.noise_std = 0.004;
        c.k_pois = 2;
        c.seed = 1;
    } else if (name == "data2") {
        c.n = 16;
        c.thin_p = 0.4;
        c.m = 200;
        c.noise_std = 0.004;
        c.k_pois = 2;
        c.seed = 2;
    } else {
        fail(ErrorKind::invalid_argument, "unknown synthetic preset '" + name + "'");
    }
    return c;
}

}  // namespace geofence::synth
