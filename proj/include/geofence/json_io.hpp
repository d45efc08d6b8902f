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
#include <json.hpp>

#include "geofence/evaluation.hpp"
#include "geofence/pipeline.hpp"
#include "geofence/synth.hpp"

namespace geofence::io {

using json = nlohmann::json;

json to_json(const BBox& b);
BBox bbox_from_json(const json& j);
json to_json(const GridSpec& spec);
GridSpec grid_spec_from_json(const json& j);
json selection_rows(const Selection& x);
Selection selection_from_rows(const json& rows);
json to_json(const Breakdown& b);
json to_json(const CoverageReport& report, bool per_user);
json to_json(const CellMatrix& m);
json to_json(const Weights& w);
json to_json(const ComparisonReport& report);

/// The SolveResult document. Wall time is left out unless `timing` is set so that
/// identical requests serialize to identical bytes.
json to_json(const pipeline::DiscreteOutcome& outcome, bool timing = false);
json to_json(const pipeline::CircularOutcome& outcome);

/// {n, linear[], pairwise[{i,j,w}], constant, window, fixed[]}.
json model_json(const QuadraticModel& model);

struct LoadedGeofence {
    Geofence geofence;
    BBox bbox;
};

/// Reads a document produced by to_json(DiscreteOutcome) or to_json(CircularOutcome).
LoadedGeofence geofence_from_json(const json& j);

Weights weights_from_json(const json& j, Weights base = {});
ModelFlags flags_from_json(const json& j, int side);
AnnealSchedule schedule_from_json(const json& j, AnnealSchedule base = {});
synth::SynthConfig synth_config_from_json(const json& j);

/// uid,t,x,y rows with round-trip precision.
void write_trajectories(std::ostream& out, const TrajectorySet& data);

json read_json_file(const std::string& path);

}  // namespace geofence::io
