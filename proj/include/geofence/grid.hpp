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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "geofence/error.hpp"

namespace geofence {

/// Axis-aligned box in source units.
struct BBox {
    double xmin = 0.0;
    double ymin = 0.0;
    double xmax = 1.0;
    double ymax = 1.0;

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    bool contains(double x, double y) const { return x >= xmin && x <= xmax && y >= ymin && y <= ymax; }

    friend bool operator==(const BBox&, const BBox&) = default;
};

/// Discretization of a bounding box into L x L cells, L = 2^d.
///
/// Row 0 holds the smallest y values, column 0 the smallest x values.
struct GridSpec {
    int d = 1;
    BBox bbox{};

    GridSpec() = default;
    GridSpec(int level, BBox box) : d(level), bbox(box) {
        require(level >= 1 && level <= 15, "discretization level must be in [1, 15]");
        require(box.xmax > box.xmin && box.ymax > box.ymin, "bounding box must have positive extent");
    }

    int side() const { return 1 << d; }
    std::size_t cells() const { return static_cast<std::size_t>(side()) * static_cast<std::size_t>(side()); }
    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(side()) + static_cast<std::size_t>(col);
    }

    friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

/// Dense row-major square matrix.
template <typename T>
class Grid {
public:
    Grid() = default;
    explicit Grid(int side, T fill = T{})
        : side_(side), data_(static_cast<std::size_t>(side) * static_cast<std::size_t>(side), fill) {}

    int side() const { return side_; }
    std::size_t size() const { return data_.size(); }

    T& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * side_ + c]; }
    const T& operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * side_ + c]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    std::span<T> flat() { return data_; }
    std::span<const T> flat() const { return data_; }
    std::vector<T>& raw() { return data_; }
    const std::vector<T>& raw() const { return data_; }

    bool in_bounds(int r, int c) const { return r >= 0 && c >= 0 && r < side_ && c < side_; }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int side_ = 0;
    std::vector<T> data_;
};

/// Cell selection matrix X: entries are 0 or 1.
using Selection = Grid<std::uint8_t>;

/// Bin a coordinate in [0,1] into one of `side` half-open bins, the last bin closed at 1.
inline int bin_of(double u, int side) {
    int k = static_cast<int>(u * side);
    if (k >= side) k = side - 1;
    if (k < 0) k = 0;
    return k;
}

}  // namespace geofence
