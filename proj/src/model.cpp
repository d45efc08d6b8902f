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

#include "geofence/model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <sstream>

namespace geofence {

namespace {

struct Offset {
    int dr;
    int dc;
};

std::array<Offset, 3> offsets(Direction dir) {
    switch (dir) {
        case Direction::RD: return {{{0, 1}, {1, 1}, {1, 0}}};
        case Direction::LU: return {{{0, -1}, {-1, -1}, {-1, 0}}};
        case Direction::RU: return {{{0, 1}, {-1, 1}, {-1, 0}}};
        case Direction::LD: return {{{0, -1}, {1, -1}, {1, 0}}};
    }
    return {};
}

constexpr std::array<Offset, 4> kFourNeighbors{{{0, 1}, {1, 0}, {0, -1}, {-1, 0}}};

void check_shape(const Selection& x, int side, const char* what) {
    if (x.side() != side) fail(ErrorKind::invalid_argument, std::string("shape mismatch in ") + what);
}

}  // namespace

std::string to_string(Direction dir) {
    switch (dir) {
        case Direction::RD: return "RD";
        case Direction::LU: return "LU";
        case Direction::RU: return "RU";
        case Direction::LD: return "LD";
    }
    return "?";
}

Direction parse_direction(const std::string& raw) {
    std::string text;
    for (char ch : raw)
        if (!std::isspace(static_cast<unsigned char>(ch))) text += static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    if (text == "RD") return Direction::RD;
    if (text == "LU") return Direction::LU;
    if (text == "RU") return Direction::RU;
    if (text == "LD") return Direction::LD;
    fail(ErrorKind::invalid_argument, "unknown domain-wall direction '" + raw + "'");
}

std::vector<Direction> parse_directions(const std::string& csv) {
    std::vector<Direction> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        auto dir = parse_direction(item);
        if (std::find(out.begin(), out.end(), dir) == out.end()) out.push_back(dir);
    }
    require(!out.empty(), "domain-wall direction set must be non-empty");
    return out;
}

void Weights::validate() const {
    for (double v : {a_area, a_cover, a_2dw, a_ng, alpha, sigma})
        require(std::isfinite(v), "weights must be finite");
    require(a_area >= 0.0 && a_cover >= 0.0 && a_2dw >= 0.0 && a_ng >= 0.0, "term coefficients must be non-negative");
    require(alpha > 0.0, "alpha must be positive");
    require(sigma > 0.0, "sigma must be positive");
}

void AreaWindow::validate(std::size_t cells) const {
    require(min_cells <= max_cells, "area window requires min_cells <= max_cells");
    require(max_cells <= cells, "area window max_cells exceeds the cell count");
}

std::size_t AreaWindow::violation(std::size_t selected) const {
    if (selected < min_cells) return min_cells - selected;
    if (selected > max_cells) return selected - max_cells;
    return 0;
}

AreaWindow window_from_percent(double min_pct, double max_pct, std::size_t cells) {
    require(min_pct >= 0.0 && max_pct <= 100.0 && min_pct <= max_pct, "area percentages must satisfy 0 <= min <= max <= 100");
    const double n = static_cast<double>(cells);
    auto max_cells = static_cast<std::size_t>(std::floor(max_pct / 100.0 * n + 1e-9));
    auto min_cells = static_cast<std::size_t>(std::ceil(min_pct / 100.0 * n - 1e-9));
    return {std::min(min_cells, max_cells), max_cells};
}

double AdjacencyCoeffs::between(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    const auto s = static_cast<std::size_t>(side);
    if (b == a + 1 && a % s != s - 1) return right[a];
    if (b == a + s) return down[a];
    fail(ErrorKind::invalid_argument, "cells are not 4-adjacent");
}

QuadraticModel QuadraticModel::zeros(int side) {
    require(side >= 1, "grid side must be positive");
    QuadraticModel m;
    m.side = side;
    m.n = static_cast<std::size_t>(side) * static_cast<std::size_t>(side);
    m.linear.assign(m.n, 0.0);
    m.fixed.assign(m.n, -1);
    return m;
}

void QuadraticModel::add_pair(std::size_t i, std::size_t j, double w) {
    require(i != j && i < n && j < n, "pairwise term needs two distinct in-range variables");
    if (i > j) std::swap(i, j);
    pairwise[{static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)}] += w;
}

std::size_t QuadraticModel::free_count() const {
    return static_cast<std::size_t>(std::count(fixed.begin(), fixed.end(), std::int8_t{-1}));
}

double QuadraticModel::energy(const Selection& x) const {
    require(x.size() == n, "selection size does not match the model");
    double e = constant;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i]) e += linear[i];
    for (const auto& [key, w] : pairwise)
        if (x[key.first] && x[key.second]) e += w;
    return e;
}

double QuadraticModel::max_abs_coefficient() const {
    double m = 0.0;
    for (double v : linear) m = std::max(m, std::abs(v));
    for (const auto& [key, w] : pairwise) m = std::max(m, std::abs(w));
    return m;
}

double area_term(const Selection& x) {
    double s = 0.0;
    for (auto v : x.raw()) s += v;
    return s;
}

Grid<double> cover_weights(int side, PoiCell poi, double alpha) {
    require(alpha > 0.0, "alpha must be positive");
    require(poi.row >= 0 && poi.col >= 0 && poi.row < side && poi.col < side, "POI cell outside the grid");
    Grid<double> c(side, 0.0);
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j)
            c(i, j) = std::pow(1.0 + std::abs(poi.row - i) + std::abs(poi.col - j), -alpha);
    return c;
}

double cover_term(const Selection& x, const Grid<double>& density, const Grid<double>& weights) {
    if (density.side() != weights.side()) fail(ErrorKind::invalid_argument, "shape mismatch in cover_term");
    check_shape(x, density.side(), "cover_term");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i]) s += weights[i] * density[i];
    return s;
}

double domain_wall_term(const Selection& x, std::span<const Direction> directions) {
    require(!directions.empty(), "domain-wall direction set must be non-empty");
    const int side = x.side();
    double s = 0.0;
    for (auto dir : directions) {
        const auto offs = offsets(dir);
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c) {
                if (!x(r, c)) continue;
                for (auto [dr, dc] : offs) {
                    if (x.in_bounds(r + dr, c + dc) && !x(r + dr, c + dc)) s += 1.0;
                }
            }
    }
    return s;
}

AdjacencyCoeffs adjacency_coeffs(const Grid<double>& density, double sigma) {
    require(sigma > 0.0, "sigma must be positive");
    const int side = density.side();
    AdjacencyCoeffs q;
    q.side = side;
    q.right.assign(density.size(), 0.0);
    q.down.assign(density.size(), 0.0);
    const double denom = 2.0 * sigma * sigma;
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            const auto i = static_cast<std::size_t>(r) * side + c;
            if (c + 1 < side) {
                const double diff = density(r, c) - density(r, c + 1);
                q.right[i] = std::exp(-diff * diff / denom);
            }
            if (r + 1 < side) {
                const double diff = density(r, c) - density(r + 1, c);
                q.down[i] = std::exp(-diff * diff / denom);
            }
        }
    return q;
}

double adjacency_term(const Selection& x, const AdjacencyCoeffs& q) {
    check_shape(x, q.side, "adjacency_term");
    const int side = x.side();
    double s = 0.0;
    // Each unordered pair contributes once: exactly one of its two orderings is (1, 0).
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            if (c + 1 < side && x(r, c) != x(r, c + 1)) s += q.right_of(r, c);
            if (r + 1 < side && x(r, c) != x(r + 1, c)) s += q.down_of(r, c);
        }
    return s;
}

QuadraticModel build_model(const Grid<double>& density, PoiCell poi, const Weights& weights,
                           std::optional<AreaWindow> window, const ModelFlags& flags) {
    weights.validate();
    const int side = density.side();
    require(side >= 1, "density grid is empty");
    require(!flags.dw_directions.empty(), "domain-wall direction set must be non-empty");
    auto model = QuadraticModel::zeros(side);
    if (window) window->validate(model.n);
    model.window = window;

    TermSources src{density, cover_weights(side, poi, weights.alpha), adjacency_coeffs(density, weights.sigma), weights,
                    flags.dw_directions};
    if (window) src.weights.a_area = 0.0;

    for (std::size_t i = 0; i < model.n; ++i) {
        model.linear[i] += src.weights.a_area;
        model.linear[i] -= weights.a_cover * src.cover_weights[i] * density[i];
    }

    auto flat = [side](int r, int c) { return static_cast<std::size_t>(r) * side + c; };
    // X_a (1 - X_b) = X_a - X_a X_b
    auto add_ordered = [&](std::size_t a, std::size_t b, double w) {
        model.add_linear(a, w);
        model.add_pair(a, b, -w);
    };

    if (weights.a_2dw != 0.0) {
        for (auto dir : flags.dw_directions) {
            const auto offs = offsets(dir);
            for (int r = 0; r < side; ++r)
                for (int c = 0; c < side; ++c)
                    for (auto [dr, dc] : offs) {
                        const int rr = r + dr, cc = c + dc;
                        if (rr < 0 || cc < 0 || rr >= side || cc >= side) continue;
                        add_ordered(flat(r, c), flat(rr, cc), weights.a_2dw);
                    }
        }
    }

    if (weights.a_ng != 0.0) {
        for (int r = 0; r < side; ++r)
            for (int c = 0; c < side; ++c)
                for (auto [dr, dc] : kFourNeighbors) {
                    const int rr = r + dr, cc = c + dc;
                    if (rr < 0 || cc < 0 || rr >= side || cc >= side) continue;
                    const auto a = flat(r, c), b = flat(rr, cc);
                    add_ordered(a, b, weights.a_ng * src.adjacency.between(a, b));
                }
    }

    for (auto cell : flags.forbidden_cells) {
        require(cell < model.n, "forbidden cell index out of range");
        model.fixed[cell] = 0;
    }
    if (flags.poi_hard) {
        const auto p = flat(poi.row, poi.col);
        if (model.fixed[p] == 0) fail(ErrorKind::invalid_argument, "POI cell is forbidden while poi_hard is set");
        model.fixed[p] = 1;
    }
    model.sources = std::move(src);
    return model;
}

Breakdown evaluate(const QuadraticModel& model, const Selection& x) {
    require(x.size() == model.n, "selection size does not match the model");
    for (std::size_t i = 0; i < model.n; ++i) {
        if (model.fixed[i] >= 0 && x[i] != static_cast<std::uint8_t>(model.fixed[i]))
            fail(ErrorKind::invalid_argument, "selection violates fixed assignment at cell " + std::to_string(i));
    }
    Breakdown b;
    b.total = model.energy(x);
    b.area = area_term(x);
    if (model.window) b.window_violation = model.window->violation(static_cast<std::size_t>(b.area));
    if (model.sources) {
        const auto& s = *model.sources;
        b.cover = cover_term(x, s.density, s.cover_weights);
        b.dw = domain_wall_term(x, s.dw_directions);
        b.ng = adjacency_term(x, s.adjacency);
        b.direct_total = model.constant + s.weights.a_area * b.area - s.weights.a_cover * b.cover +
                         s.weights.a_2dw * b.dw + s.weights.a_ng * b.ng;
    } else {
        b.direct_total = b.total;
    }
    return b;
}

bool is_feasible(const QuadraticModel& model, const Selection& x) {
    if (x.size() != model.n) return false;
    std::size_t count = 0;
    for (std::size_t i = 0; i < model.n; ++i) {
        if (x[i] > 1) return false;
        if (model.fixed[i] >= 0 && x[i] != static_cast<std::uint8_t>(model.fixed[i])) return false;
        count += x[i];
    }
    return !model.window || model.window->violation(count) == 0;
}

}  // namespace geofence
