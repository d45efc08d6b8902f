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

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geofence/grid.hpp"

namespace geofence {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

struct TrajectoryPoint {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
};

struct Trajectory {
    std::string uid;
    std::vector<TrajectoryPoint> points;
};

/// Trajectories grouped one per user id, ordered by uid.
struct TrajectorySet {
    std::vector<Trajectory> trajectories;

    bool empty() const { return trajectories.empty(); }
    std::size_t users() const { return trajectories.size(); }
    std::size_t total_points() const;
};

/// Per-cell user density, entries in [0, 1].
struct CellMatrix {
    GridSpec spec;
    Grid<double> values;
};

struct PoiCell {
    int row = 0;
    int col = 0;

    friend bool operator==(const PoiCell&, const PoiCell&) = default;
};

struct CsvOptions {
    bool header = false;    // first row is a header and is skipped
    bool iso_time = false;  // t column is ISO-8601 instead of float seconds
    bool latlon = false;    // x = longitude, y = latitude in degrees
};

/// Parse `uid,t,x,y` rows. Rows are grouped by uid and time-sorted.
/// Throws Error(parse) naming the offending line for malformed rows.
TrajectorySet parse_trajectories(std::istream& in, const CsvOptions& options = {});

/// Parse "YYYY-MM-DDTHH:MM:SS[.fff][Z]" (or a space separator) into Unix seconds.
std::optional<double> parse_iso8601(const std::string& text);

/// Local equirectangular projection around the data centroid. Input x is longitude,
/// y latitude (degrees); output is meters east/north of the centroid.
TrajectorySet project_latlon(const TrajectorySet& data);

/// Keep points strictly closer than `radius` to `center`; drop emptied trajectories.
TrajectorySet filter_region(const TrajectorySet& data, Point2 center, double radius);

/// Drop users with fewer than `min_points` points.
TrajectorySet filter_min_points(const TrajectorySet& data, std::size_t min_points);

/// Per-axis affine map onto [0,1]. Returns the data and the source-unit bounding box.
std::pair<TrajectorySet, BBox> normalize(const TrajectorySet& data);

/// Map a source-unit point into the unit square of `bbox`.
Point2 to_unit(Point2 p, const BBox& bbox);
/// Inverse of to_unit.
Point2 from_unit(Point2 u, const BBox& bbox);

enum class DensityScale {
    max_cell,    // divide by the largest cell count (peak density 1)
    user_count,  // divide by the number of users
};

/// Unique-user count per cell of an L x L grid, scaled into [0, 1].
/// Input coordinates must already be normalized.
CellMatrix discretize(const TrajectorySet& normalized, int d, DensityScale scale = DensityScale::max_cell,
                      const BBox& bbox = BBox{});

/// Raw (unscaled) unique-user counts per cell.
Grid<int> user_counts(const TrajectorySet& normalized, int d);

/// Cell holding a source-unit point, using the same binning as discretize.
PoiCell poi_to_cell(Point2 poi, const BBox& bbox, int d);

/// Cell holding a unit-square point.
PoiCell unit_to_cell(Point2 u, int d);

}  // namespace geofence
