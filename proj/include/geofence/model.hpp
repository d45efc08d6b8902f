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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geofence/grid.hpp"
#include "geofence/ingest.hpp"

namespace geofence {

/// Neighbor sets for the two-dimensional domain-wall term.
///   RD: right, bottom-right, below     LU: left, top-left, above
///   RU: right, top-right, above        LD: left, bottom-left, below
/// "Below" is row + 1.
enum class Direction { RD, LU, RU, LD };

std::string to_string(Direction dir);
Direction parse_direction(const std::string& text);
std::vector<Direction> parse_directions(const std::string& csv);

struct Weights {
    double a_area = 0.0;
    double a_cover = 60.0;
    double a_2dw = 1.0;
    double a_ng = 1.0;
    double alpha = 0.5;  // distance-decay exponent of the cover weights
    double sigma = 0.5;  // width of the adjacency kernel

    void validate() const;
};

/// Hard bounds on the number of selected cells.
struct AreaWindow {
    std::size_t min_cells = 0;
    std::size_t max_cells = 0;

    void validate(std::size_t cells) const;
    /// Cells outside [min_cells, max_cells]; 0 when inside.
    std::size_t violation(std::size_t selected) const;

    friend bool operator==(const AreaWindow&, const AreaWindow&) = default;
};

/// Window from percentages of the cell count: max rounds down, min rounds up (capped at max).
AreaWindow window_from_percent(double min_pct, double max_pct, std::size_t cells);

struct ModelFlags {
    bool poi_hard = false;
    std::vector<Direction> dw_directions{Direction::RD, Direction::LU};
    std::vector<std::size_t> forbidden_cells;  // flat indices forced to 0
};

/// Gaussian similarity weights on 4-neighbor pairs. right(r,c) couples (r,c)-(r,c+1),
/// down(r,c) couples (r,c)-(r+1,c).
struct AdjacencyCoeffs {
    int side = 0;
    std::vector<double> right;
    std::vector<double> down;

    double right_of(int r, int c) const { return right[static_cast<std::size_t>(r) * side + c]; }
    double down_of(int r, int c) const { return down[static_cast<std::size_t>(r) * side + c]; }
    /// Weight between two 4-adjacent cells given as flat indices.
    double between(std::size_t a, std::size_t b) const;
};

/// Inputs kept on the model so every objective can be recomputed term by term.
struct TermSources {
    Grid<double> density;
    Grid<double> cover_weights;
    AdjacencyCoeffs adjacency;
    Weights weights;
    std::vector<Direction> dw_directions;
};

/// Quadratic 0-1 model: constant + sum linear[i] x_i + sum_{i<j} w_ij x_i x_j,
/// optionally subject to an area window and fixed assignments.
struct QuadraticModel {
    int side = 0;
    std::size_t n = 0;
    std::vector<double> linear;
    std::map<std::pair<std::uint32_t, std::uint32_t>, double> pairwise;  // keys i < j
    double constant = 0.0;
    std::optional<AreaWindow> window;
    std::vector<std::int8_t> fixed;  // -1 free, 0 or 1 forced
    std::optional<TermSources> sources;

    /// Empty model over an L x L grid.
    static QuadraticModel zeros(int side);

    void add_linear(std::size_t i, double w) { linear[i] += w; }
    void add_pair(std::size_t i, std::size_t j, double w);
    std::size_t free_count() const;
    /// Compiled-coefficient energy. Does not check the window or fixed cells.
    double energy(const Selection& x) const;
    double max_abs_coefficient() const;
};

struct Breakdown {
    double total = 0.0;         // compiled evaluation
    double direct_total = 0.0;  // recomputed from the four terms
    double area = 0.0;
    double cover = 0.0;
    double dw = 0.0;
    double ng = 0.0;
    std::size_t window_violation = 0;
};

double area_term(const Selection& x);

/// C(i,j) = (1 + |P_r - i| + |P_c - j|)^(-alpha).
Grid<double> cover_weights(int side, PoiCell poi, double alpha);

double cover_term(const Selection& x, const Grid<double>& density, const Grid<double>& weights);

double domain_wall_term(const Selection& x, std::span<const Direction> directions);

AdjacencyCoeffs adjacency_coeffs(const Grid<double>& density, double sigma);

double adjacency_term(const Selection& x, const AdjacencyCoeffs& q);

/// Compile A_area f_area - A_cover f_cover + A_2DW f_2DW + A_ng f_ng into a quadratic model.
/// With a window, A_area is dropped and the window becomes a hard constraint.
QuadraticModel build_model(const Grid<double>& density, PoiCell poi, const Weights& weights,
                           std::optional<AreaWindow> window, const ModelFlags& flags = {});

/// Objective breakdown. Throws if x violates a fixed assignment.
Breakdown evaluate(const QuadraticModel& model, const Selection& x);

/// True when x satisfies the window and every fixed assignment.
bool is_feasible(const QuadraticModel& model, const Selection& x);

}  // namespace geofence
