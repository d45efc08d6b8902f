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
#include <vector>

#include "geofence/model.hpp"

namespace geofence {

/// Largest free-variable count solve_exact accepts.
inline constexpr std::size_t kExactMaxFree = 22;

/// Records every accepted annealing move (penalized energy after the move).
struct AnnealTrace {
    std::vector<double> accepted_energies;
};

struct AnnealSchedule {
    std::size_t sweeps = 2000;  // each sweep proposes n single-bit flips
    double t_start = 0.0;       // 0 selects max |coefficient| of the model
    double t_end = 1e-3;
    int restarts = 8;
    std::uint64_t seed = 0;
    bool polish = true;  // run local_search on every restart's result
    int local_search_passes = 100;
    AnnealTrace* trace = nullptr;

    void validate() const;
};

struct SolveResult {
    Selection x;
    Breakdown breakdown;
    bool feasible = false;
    double wall_time = 0.0;
    std::string solver_id;
    std::uint64_t seed = 0;
    std::size_t free_variables = 0;
};

/// Compressed symmetric adjacency of a QuadraticModel's pairwise terms.
class CompiledQubo {
public:
    explicit CompiledQubo(const QuadraticModel& model);

    const QuadraticModel& model() const { return *model_; }
    std::size_t size() const { return model_->n; }
    double linear(std::size_t i) const { return model_->linear[i]; }

    struct Edge {
        std::uint32_t to;
        double w;
    };
    std::span<const Edge> neighbors(std::size_t i) const {
        return {edges_.data() + offsets_[i], edges_.data() + offsets_[i + 1]};
    }
    double coupling(std::size_t i, std::size_t j) const;
    /// max_i (|linear_i| + sum_j |w_ij|): bounds the energy change of any single flip.
    double max_flip_magnitude() const;

private:
    const QuadraticModel* model_;
    std::vector<std::size_t> offsets_;
    std::vector<Edge> edges_;
};

/// Selection with incrementally maintained energy and local fields.
class FlipState {
public:
    FlipState(const CompiledQubo& qubo, Selection x);

    const Selection& x() const { return x_; }
    double energy() const { return energy_; }
    std::size_t count() const { return count_; }
    bool selected(std::size_t i) const { return x_[i] != 0; }
    /// Energy change if bit i were flipped.
    double delta(std::size_t i) const { return x_[i] ? -field_[i] : field_[i]; }
    /// Energy change of removing selected i and adding unselected j together.
    double swap_delta(std::size_t remove, std::size_t add) const;
    void flip(std::size_t i);

private:
    const CompiledQubo* qubo_;
    Selection x_;
    std::vector<double> field_;  // linear_i + sum_j w_ij x_j
    double energy_ = 0.0;
    std::size_t count_ = 0;
};

/// Globally optimal feasible selection by Gray-code enumeration of the free variables.
/// Ties go to the lexicographically smallest bit pattern in (row, col) order.
SolveResult solve_exact(const QuadraticModel& model);

/// Simulated annealing with window penalties, then repair and local search; best of restarts.
SolveResult solve_anneal(const QuadraticModel& model, const AnnealSchedule& schedule = {});

/// solve_exact when the free-variable count allows, otherwise solve_anneal.
SolveResult solve_auto(const QuadraticModel& model, const AnnealSchedule& schedule = {});

/// Greedily remove (or add) the free cells with the best marginal objective until the
/// selection lies inside the window.
Selection repair(const Selection& x, const QuadraticModel& model);

/// Feasibility-preserving 1-flip and swap descent; stops at a local optimum or after max_passes.
Selection local_search(const Selection& x, const QuadraticModel& model, int max_passes = 100);

/// Top cells by cover score (C*V, or -linear without term sources) filled up to the window, then repaired.
Selection greedy_baseline(const QuadraticModel& model);

/// Throws Error(infeasible) when the window cannot be met given the fixed assignments.
void check_window_reachable(const QuadraticModel& model);

struct HierarchicalConfig {
    int d_coarse = 2;
    int d_fine = 4;
    double area_min_pct = 0.0;
    double area_max_pct = 15.0;
    Weights weights{};
    ModelFlags flags{};  // forbidden cells are fine-level indices
    AnnealSchedule schedule{};
};

struct HierarchicalResult {
    SolveResult coarse;
    SolveResult fine;
    Selection region;  // fine-level mask of cells left free after dilation
};

/// Solve at the coarse level, dilate the selection by one coarse cell, then solve the fine
/// model with everything outside the dilated region fixed to 0.
HierarchicalResult solve_hierarchical(const Grid<double>& coarse_density, const Grid<double>& fine_density,
                                      PoiCell poi_fine, const HierarchicalConfig& config);

/// Coarse density obtained from the fine one by block max, rescaled to peak 1.
HierarchicalResult solve_hierarchical(const Grid<double>& fine_density, PoiCell poi_fine,
                                      const HierarchicalConfig& config);

/// Block-max coarsening by 2^levels, rescaled so the peak is 1 (all-zero stays zero).
Grid<double> coarsen_max(const Grid<double>& fine, int levels);

}  // namespace geofence
