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

#include "geofence/geojson.hpp"

#include <cmath>
#include <numbers>

namespace geofence::io {

namespace {

json feature_collection(json features) {
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json position(Point2 p) { return json::array({p.x, p.y}); }

}  // namespace

json export_geojson(const DiscreteGeofence& geofence, const BBox& bbox, const json& properties) {
    if (!(geofence.spec.bbox == bbox)) fail(ErrorKind::invalid_argument, "bbox does not match the geofence grid");
    require(geofence.x.side() == geofence.spec.side(), "selection does not match the grid");
    const int side = geofence.spec.side();
    json polygons = json::array();
    for (int r = 0; r < side; ++r)
        for (int c = 0; c < side; ++c) {
            if (!geofence.x(r, c)) continue;
            const double u0 = static_cast<double>(c) / side, u1 = static_cast<double>(c + 1) / side;
            const double v0 = static_cast<double>(r) / side, v1 = static_cast<double>(r + 1) / side;
            // Counter-clockwise exterior ring.
            json ring = json::array({position(from_unit({u0, v0}, bbox)), position(from_unit({u1, v0}, bbox)),
                                     position(from_unit({u1, v1}, bbox)), position(from_unit({u0, v1}, bbox)),
                                     position(from_unit({u0, v0}, bbox))});
            polygons.push_back(json::array({std::move(ring)}));
        }
    if (polygons.empty()) return feature_collection(json::array());
    json props = properties.is_object() ? properties : json::object();
    props["kind"] = "discrete";
    props["cells"] = polygons.size();
    json feature{{"type", "Feature"},
                 {"geometry", {{"type", "MultiPolygon"}, {"coordinates", std::move(polygons)}}},
                 {"properties", std::move(props)}};
    return feature_collection(json::array({std::move(feature)}));
}

json export_geojson(const CircularGeofence& geofence, const BBox& bbox, const json& properties, int segments) {
    require(segments >= 3, "circle polygon needs at least 3 segments");
    require(geofence.r > 0.0, "circle radius must be positive");
    json ring = json::array();
    for (int k = 0; k <= segments; ++k) {
        const double a = 2.0 * std::numbers::pi * static_cast<double>(k % segments) / segments;
        ring.push_back(position(from_unit({geofence.cx + geofence.r * std::cos(a), geofence.cy + geofence.r * std::sin(a)}, bbox)));
    }
    json props = properties.is_object() ? properties : json::object();
    props["kind"] = "circular";
    props["center"] = position(from_unit({geofence.cx, geofence.cy}, bbox));
    props["radius_normalized"] = geofence.r;
    json feature{{"type", "Feature"},
                 {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({std::move(ring)})}}},
                 {"properties", std::move(props)}};
    return feature_collection(json::array({std::move(feature)}));
}

json export_geojson(const LoadedGeofence& loaded, const json& properties) {
    if (const auto* c = std::get_if<CircularGeofence>(&loaded.geofence)) return export_geojson(*c, loaded.bbox, properties);
    return export_geojson(std::get<DiscreteGeofence>(loaded.geofence), loaded.bbox, properties);
}

}  // namespace geofence::io
