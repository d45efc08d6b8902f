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
#include <string>
#include <utility>
#include <vector>

#include "geofence/ingest.hpp"

namespace geofence::synth {

/// n x n lattice with vertex (row, col) at (col / (n-1), row / (n-1)).
class LatticeGraph {
public:
    explicit LatticeGraph(int n);

    int side() const { return n_; }
    int vertices() const { return n_ * n_; }
    int vertex(int row, int col) const { return row * n_ + col; }
    Point2 position(int v) const;

    /// Edges as (u, v) with u < v, sorted.
    std::vector<std::pair<int, int>> edges() const;
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<int>& neighbors(int v) const { return adj_[static_cast<std::size_t>(v)]; }
    bool has_edge(int u, int v) const;
    void add_edge(int u, int v);
    void remove_edge(int u, int v);
    bool connected() const;
    /// Hop distances from `source` (-1 when unreachable).
    std::vector<int> bfs(int source) const;

private:
    int n_;
    std::size_t edge_count_ = 0;
    std::vector<std::vector<int>> adj_;
};

struct SynthConfig {
    int n = 12;
    double thin_p = 0.3;
    int m = 150;
    double noise_std = 0.004;
    int k_pois = 2;
    std::uint64_t seed = 0;
    int points_per_edge = 4;

    void validate() const;
};

/// Lattice whose edges are each dropped with probability thin_p, visiting edges in a seeded
/// random order and keeping any edge whose removal would disconnect the graph.
LatticeGraph generate_graph(int n, double thin_p, std::uint64_t seed);

/// k distinct lattice vertices, uniform without replacement.
std::vector<Point2> place_pois(int k, std::uint64_t seed, const LatticeGraph& graph);

/// m origin-destination shortest paths with seeded tie-breaks, interpolated along edges and
/// perturbed by isotropic Gaussian noise. uid is the zero-padded trajectory index, t the point index.
TrajectorySet sample_trajectories(const LatticeGraph& graph, int m, double noise_std, std::uint64_t seed,
                                  int points_per_edge = 4);

struct Dataset {
    TrajectorySet data;
    std::vector<Point2> pois;
};

Dataset build_dataset(const SynthConfig& config);

/// Named presets "data1" and "data2".
SynthConfig preset(const std::string& name);

}  // namespace geofence::synth
