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

#include "geofence/json_io.hpp"

namespace geofence::io {

/// Selected cells as one MultiPolygon feature of axis-aligned rectangles in source units.
/// An empty selection yields an empty FeatureCollection. Throws when `bbox` differs from the grid's.
json export_geojson(const DiscreteGeofence& geofence, const BBox& bbox, const json& properties = json::object());

/// Circle mapped to source units as a closed polygon with `segments` vertices.
json export_geojson(const CircularGeofence& geofence, const BBox& bbox, const json& properties = json::object(),
                    int segments = 64);

/// Dispatches on a loaded solve document.
json export_geojson(const LoadedGeofence& loaded, const json& properties = json::object());

}  // namespace geofence::io
