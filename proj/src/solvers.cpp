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

#include "geofence/solvers.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace geofence {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::size_t fixed_ones(const QuadraticModel& model) {
    return static_cast<std::size_t>(std::count(model.fixed.begin(), model.fixed.end(), std::int8_t{1}));
}

std::vector<std::size_t> free_indices(const QuadraticModel& model) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < model.n; ++i)
        if (model.fixed[i] < 0) out.push_back(i);
    return out;
}

Selection fixed_start(const QuadraticModel& model) {
    Selection x(model.side, 0);
    for (std::size_t i = 0; i < model.n; ++i)
        if (model.fixed[i] == 1) x[i] = 1;
    return x;
}

// True when a is lexicographically smaller than b in (row, col) order.
bool lex_less(const Selection& a, const Selection& b) {
    return std::lexicographical_compare(a.raw().begin(), a.raw().end(), b.raw().begin(), b.raw().end());
}

// Strictly better objective, or equal objective and lexicographically smaller.
bool better(double ea, const Selection& a, double eb, const Selection& b) {
    const double tol = 1e-9 * std::max(1.0, std::abs(eb));
    if (ea < eb - tol) return true;
    if (ea > eb + tol) return false;
    return lex_less(a, b);
}

double window_penalty(const std::optional<AreaWindow>& window, std::size_t count, double lambda) {
    if (!window) return 0.0;
    double s = 0.0;
    if (count < window->min_cells) s = static_cast<double>(window->min_cells - count);
    if (count > window->max_cells) s = static_cast<double>(count - window->max_cells);
    return lambda * s * s;
}

SolveResult finish(const QuadraticModel& model, Selection x, std::string solver_id, std::uint64_t seed,
                   Clock::time_point start) {
    SolveResult r;
    r.feasible = is_feasible(model, x);
    r.breakdown = evaluate(model, x);
    r.x = std::move(x);
    r.solver_id = std::move(solver_id);
    r.seed = seed;
    r.free_variables = model.free_count();
    r.wall_time = seconds_since(start);
    return r;
}

}  // namespace

void AnnealSchedule::validate() const {
    require(sweeps >= 1, "anneal schedule needs at least one sweep");
    require(t_start >= 0.0 && std::isfinite(t_start), "t_start must be finite and non-negative");
    require(t_end > 0.0, "t_end must be positive");
    require(t_start == 0.0 || t_end <= t_start, "t_end must not exceed t_start");
    require(restarts >= 1, "anneal schedule needs at least one restart");
    require(local_search_passes >= 0, "local_search_passes must be non-negative");
}

CompiledQubo::CompiledQubo(const QuadraticModel& model) : model_(&model) {
    std::vector<std::size_t> degree(model.n, 0);
    for (const auto& [key, w] : model.pairwise) {
        ++degree[key.first];
        ++degree[key.second];
    }
    offsets_.assign(model.n + 1, 0);
    for (std::size_t i = 0; i < model.n; ++i) offsets_[i + 1] = offsets_[i] + degree[i];
    edges_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& [key, w] : model.pairwise) {
        edges_[fill[key.first]++] = {key.second, w};
        edges_[fill[key.second]++] = {key.first, w};
    }
}

double CompiledQubo::coupling(std::size_t i, std::size_t j) const {
    for (const auto& e : neighbors(i))
        if (e.to == j) return e.w;
    return 0.0;
}

double CompiledQubo::max_flip_magnitude() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double s = std::abs(linear(i));
        for (const auto& e : neighbors(i)) s += std::abs(e.w);
        m = std::max(m, s);
    }
    return m;
}

FlipState::FlipState(const CompiledQubo& qubo, Selection x) : qubo_(&qubo), x_(std::move(x)) {
    require(x_.size() == qubo.size(), "selection size does not match the model");
    field_.assign(qubo.size(), 0.0);
    for (std::size_t i = 0; i < qubo.size(); ++i) {
        field_[i] = qubo.linear(i);
        for (const auto& e : qubo.neighbors(i))
            if (x_[e.to]) field_[i] += e.w;
    }
    energy_ = qubo.model().energy(x_);
    count_ = static_cast<std::size_t>(std::count(x_.raw().begin(), x_.raw().end(), std::uint8_t{1}));
}

double FlipState::swap_delta(std::size_t remove, std::size_t add) const {
    return -field_[remove] + field_[add] - qubo_->coupling(remove, add);
}

void FlipState::flip(std::size_t i) {
    const double sign = x_[i] ? -1.0 : 1.0;
    energy_ += sign * field_[i];
    x_[i] ^= 1;
    if (x_[i]) ++count_; else --count_;
    for (const auto& e : qubo_->neighbors(i)) field_[e.to] += sign * e.w;
}

void check_window_reachable(const QuadraticModel& model) {
    if (!model.window) return;
    const std::size_t ones = fixed_ones(model);
    const std::size_t can_add = model.free_count();
    if (ones > model.window->max_cells || ones + can_add < model.window->min_cells)
        fail(ErrorKind::infeasible, "area window [" + std::to_string(model.window->min_cells) + ", " +
                                        std::to_string(model.window->max_cells) +
                                        "] is unreachable given the fixed assignments");
}

SolveResult solve_exact(const QuadraticModel& model) {
    const auto start = Clock::now();
    const auto free = free_indices(model);
    if (free.size() > kExactMaxFree)
        fail(ErrorKind::invalid_argument, "exact solver supports at most " + std::to_string(kExactMaxFree) +
                                              " free variables, model has " + std::to_string(free.size()));
    check_window_reachable(model);

    CompiledQubo qubo(model);
    FlipState state(qubo, fixed_start(model));
    auto feasible_count = [&](std::size_t k) { return !model.window || model.window->violation(k) == 0; };

    Selection best = state.x();
    double best_e = std::numeric_limits<double>::infinity();
    bool have = false;
    if (feasible_count(state.count())) {
        best_e = state.energy();
        have = true;
    }
    const std::uint64_t total = std::uint64_t{1} << free.size();
    for (std::uint64_t g = 1; g < total; ++g) {
        state.flip(free[static_cast<std::size_t>(std::countr_zero(g))]);
        if (!feasible_count(state.count())) continue;
        const double e = state.energy();
        if (!have || better(e, state.x(), best_e, best)) {
            best = state.x();
            best_e = e;
            have = true;
        }
    }
    if (!have) fail(ErrorKind::infeasible, "no feasible selection exists");
    return finish(model, std::move(best), "exact", 0, start);
}

Selection repair(const Selection& x, const QuadraticModel& model) {
    require(x.size() == model.n, "selection size does not match the model");
    for (std::size_t i = 0; i < model.n; ++i)
        require(model.fixed[i] < 0 || x[i] == static_cast<std::uint8_t>(model.fixed[i]),
                "repair input violates a fixed assignment");
    if (!model.window) return x;
    check_window_reachable(model);
    CompiledQubo qubo(model);
    FlipState state(qubo, x);
    const auto free = free_indices(model);
    while (state.count() > model.window->max_cells || state.count() < model.window->min_cells) {
        const bool removing = state.count() > model.window->max_cells;
        std::size_t pick = model.n;
        double pick_delta = std::numeric_limits<double>::infinity();
        for (auto i : free) {
            if (state.selected(i) != removing) continue;
            const double d = state.delta(i);
            if (d < pick_delta) {
                pick_delta = d;
                pick = i;
            }
        }
        if (pick == model.n) fail(ErrorKind::infeasible, "window unreachable during repair");
        state.flip(pick);
    }
    return state.x();
}

Selection local_search(const Selection& x, const QuadraticModel& model, int max_passes) {
    CompiledQubo qubo(model);
    FlipState state(qubo, x);
    const auto free = free_indices(model);
    const std::size_t lo = model.window ? model.window->min_cells : 0;
    const std::size_t hi = model.window ? model.window->max_cells : model.n;
    const double scale = std::max(1.0, qubo.max_flip_magnitude());
    const double eps = 1e-12 * scale;

    std::vector<std::size_t> on, off;
    for (int pass = 0; pass < max_passes; ++pass) {
        bool improved = false;
        for (auto i : free) {
            const bool sel = state.selected(i);
            if (sel && state.count() <= lo) continue;
            if (!sel && state.count() >= hi) continue;
            if (state.delta(i) < -eps) {
                state.flip(i);
                improved = true;
            }
        }
        on.clear();
        off.clear();
        for (auto i : free) (state.selected(i) ? on : off).push_back(i);
        double best = -eps;
        std::size_t best_on = model.n, best_off = model.n;
        for (auto i : on) {
            for (auto j : off) {
                const double d = state.swap_delta(i, j);
                if (d < best) {
                    best = d;
                    best_on = i;
                    best_off = j;
                }
            }
        }
        if (best_on != model.n) {
            state.flip(best_on);
            state.flip(best_off);
            improved = true;
        }
        if (!improved) break;
    }
    return state.x();
}

Selection greedy_baseline(const QuadraticModel& model) {
    check_window_reachable(model);
    Selection x = fixed_start(model);
    auto free = free_indices(model);
    std::vector<double> score(model.n, 0.0);
    for (auto i : free)
        score[i] = model.sources ? model.sources->cover_weights[i] * model.sources->density[i] : -model.linear[i];
    std::stable_sort(free.begin(), free.end(), [&](std::size_t a, std::size_t b) { return score[a] > score[b]; });
    if (model.window) {
        const std::size_t ones = fixed_ones(model);
        const std::size_t want = model.window->max_cells > ones ? model.window->max_cells - ones : 0;
        for (std::size_t k = 0; k < want && k < free.size(); ++k) x[free[k]] = 1;
    } else {
        for (auto i : free)
            if (model.linear[i] < 0.0) x[i] = 1;
    }
    return repair(x, model);
}

SolveResult solve_anneal(const QuadraticModel& model, const AnnealSchedule& schedule) {
    const auto start = Clock::now();
    schedule.validate();
    check_window_reachable(model);
    CompiledQubo qubo(model);
    const auto free = free_indices(model);
    const double lambda = 1.0 + qubo.max_flip_magnitude();
    const double t_start = schedule.t_start > 0.0 ? schedule.t_start : std::max(model.max_abs_coefficient(), schedule.t_end);
    const double t_end = std::min(schedule.t_end, t_start);

    double init_p = 0.5;
    if (model.window && model.n > 0)
        init_p = 0.5 * static_cast<double>(model.window->min_cells + model.window->max_cells) / static_cast<double>(model.n);

    Selection best = greedy_baseline(model);
    double best_e = model.energy(best);

    for (int restart = 0; restart < schedule.restarts; ++restart) {
        std::seed_seq seq{static_cast<std::uint32_t>(schedule.seed), static_cast<std::uint32_t>(schedule.seed >> 32),
                          static_cast<std::uint32_t>(restart)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        Selection x0 = fixed_start(model);
        for (auto i : free) x0[i] = unit(rng) < init_p ? 1 : 0;
        FlipState state(qubo, std::move(x0));

        auto penalized = [&](std::size_t count) { return state.energy() + window_penalty(model.window, count, lambda); };
        auto feasible_now = [&] { return !model.window || model.window->violation(state.count()) == 0; };

        Selection run_best = state.x();
        double run_best_e = std::numeric_limits<double>::infinity();
        if (feasible_now()) run_best_e = state.energy();

        if (!free.empty()) {
            std::uniform_int_distribution<std::size_t> pick(0, free.size() - 1);
            const double ratio = schedule.sweeps > 1 ? std::pow(t_end / t_start, 1.0 / static_cast<double>(schedule.sweeps - 1)) : 1.0;
            double temperature = t_start;
            for (std::size_t sweep = 0; sweep < schedule.sweeps; ++sweep, temperature *= ratio) {
                for (std::size_t step = 0; step < free.size(); ++step) {
                    const std::size_t i = free[pick(rng)];
                    const std::size_t k = state.count();
                    const std::size_t k_new = state.selected(i) ? k - 1 : k + 1;
                    const double d = state.delta(i) + window_penalty(model.window, k_new, lambda) -
                                     window_penalty(model.window, k, lambda);
                    const double u = unit(rng);
                    if (d <= 0.0 || u < std::exp(-d / temperature)) {
                        state.flip(i);
                        if (schedule.trace) schedule.trace->accepted_energies.push_back(penalized(state.count()));
                        if (feasible_now() && state.energy() < run_best_e) {
                            run_best_e = state.energy();
                            run_best = state.x();
                        }
                    }
                }
            }
        }

        Selection candidate = std::isfinite(run_best_e) ? run_best : repair(state.x(), model);
        if (schedule.polish) candidate = local_search(candidate, model, schedule.local_search_passes);
        const double e = model.energy(candidate);
        if (better(e, candidate, best_e, best)) {
            best = std::move(candidate);
            best_e = e;
        }
    }
    return finish(model, std::move(best), "anneal", schedule.seed, start);
}

SolveResult solve_auto(const QuadraticModel& model, const AnnealSchedule& schedule) {
    if (model.free_count() <= kExactMaxFree) return solve_exact(model);
    return solve_anneal(model, schedule);
}

Grid<double> coarsen_max(const Grid<double>& fine, int levels) {
    require(levels >= 0, "coarsening levels must be non-negative");
    const int block = 1 << levels;
    require(fine.side() % block == 0 && fine.side() >= block, "grid side is not divisible by the block size");
    Grid<double> out(fine.side() / block, 0.0);
    double peak = 0.0;
    for (int r = 0; r < fine.side(); ++r)
        for (int c = 0; c < fine.side(); ++c) {
            double& cell = out(r / block, c / block);
            cell = std::max(cell, fine(r, c));
            peak = std::max(peak, cell);
        }
    if (peak > 0.0)
        for (auto& v : out.raw()) v /= peak;
    return out;
}

HierarchicalResult solve_hierarchical(const Grid<double>& coarse_density, const Grid<double>& fine_density,
                                      PoiCell poi_fine, const HierarchicalConfig& config) {
    const auto start = Clock::now();
    require(config.d_coarse >= 1 && config.d_coarse < config.d_fine, "hierarchical solve needs 1 <= d_coarse < d_fine");
    const int levels = config.d_fine - config.d_coarse;
    const int block = 1 << levels;
    const int fine_side = 1 << config.d_fine;
    const int coarse_side = 1 << config.d_coarse;
    require(fine_density.side() == fine_side, "fine density does not match d_fine");
    require(coarse_density.side() == coarse_side, "coarse density does not match d_coarse");
    require(config.area_min_pct >= 0.0 && config.area_max_pct <= 100.0 && config.area_min_pct <= config.area_max_pct,
            "area percentages must satisfy 0 <= min <= max <= 100");

    const PoiCell poi_coarse{poi_fine.row / block, poi_fine.col / block};

    // Coarse cells are candidates, so the coarse window rounds outward.
    const auto coarse_cells = static_cast<std::size_t>(coarse_side) * coarse_side;
    AreaWindow coarse_window{
        static_cast<std::size_t>(std::floor(config.area_min_pct / 100.0 * coarse_cells + 1e-9)),
        static_cast<std::size_t>(std::ceil(config.area_max_pct / 100.0 * coarse_cells - 1e-9))};
    if (config.area_max_pct > 0.0) coarse_window.max_cells = std::max<std::size_t>(coarse_window.max_cells, 1);
    coarse_window.max_cells = std::min(coarse_window.max_cells, coarse_cells);

    ModelFlags coarse_flags = config.flags;
    coarse_flags.forbidden_cells.clear();
    {
        std::vector<int> forbidden_children(coarse_cells, 0);
        for (auto cell : config.flags.forbidden_cells) {
            require(cell < static_cast<std::size_t>(fine_side) * fine_side, "forbidden cell index out of range");
            const int r = static_cast<int>(cell) / fine_side, c = static_cast<int>(cell) % fine_side;
            ++forbidden_children[static_cast<std::size_t>(r / block) * coarse_side + c / block];
        }
        for (std::size_t i = 0; i < coarse_cells; ++i)
            if (forbidden_children[i] == block * block) coarse_flags.forbidden_cells.push_back(i);
    }

    HierarchicalResult out;
    auto coarse_model = build_model(coarse_density, poi_coarse, config.weights, coarse_window, coarse_flags);
    try {
        out.coarse = solve_auto(coarse_model, config.schedule);
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::infeasible) fail(ErrorKind::infeasible, std::string("coarse solve infeasible: ") + e.what());
        throw;
    }
    if (!out.coarse.feasible) fail(ErrorKind::infeasible, "coarse solve infeasible");

    // Dilate by one coarse cell (8-neighborhood).
    Grid<std::uint8_t> dilated(coarse_side, 0);
    for (int r = 0; r < coarse_side; ++r)
        for (int c = 0; c < coarse_side; ++c) {
            if (!out.coarse.x(r, c)) continue;
            for (int dr = -1; dr <= 1; ++dr)
                for (int dc = -1; dc <= 1; ++dc)
                    if (dilated.in_bounds(r + dr, c + dc)) dilated(r + dr, c + dc) = 1;
        }

    out.region = Selection(fine_side, 0);
    ModelFlags fine_flags = config.flags;
    for (int r = 0; r < fine_side; ++r)
        for (int c = 0; c < fine_side; ++c) {
            if (dilated(r / block, c / block)) out.region(r, c) = 1;
            else fine_flags.forbidden_cells.push_back(static_cast<std::size_t>(r) * fine_side + c);
        }
    std::sort(fine_flags.forbidden_cells.begin(), fine_flags.forbidden_cells.end());
    fine_flags.forbidden_cells.erase(std::unique(fine_flags.forbidden_cells.begin(), fine_flags.forbidden_cells.end()),
                                     fine_flags.forbidden_cells.end());
    if (config.flags.poi_hard && !out.region(poi_fine.row, poi_fine.col))
        fail(ErrorKind::infeasible, "POI cell lies outside the dilated coarse region");

    const auto fine_window = window_from_percent(config.area_min_pct, config.area_max_pct,
                                                 static_cast<std::size_t>(fine_side) * fine_side);
    auto fine_model = build_model(fine_density, poi_fine, config.weights, fine_window, fine_flags);
    out.fine = solve_auto(fine_model, config.schedule);
    out.fine.solver_id = "hier:" + out.coarse.solver_id + "/" + out.fine.solver_id;
    out.fine.seed = config.schedule.seed;
    out.fine.wall_time = seconds_since(start);
    return out;
}

HierarchicalResult solve_hierarchical(const Grid<double>& fine_density, PoiCell poi_fine,
                                      const HierarchicalConfig& config) {
    require(config.d_fine > config.d_coarse, "hierarchical solve needs d_coarse < d_fine");
    return solve_hierarchical(coarsen_max(fine_density, config.d_fine - config.d_coarse), fine_density, poi_fine,
                              config);
}

}  // namespace geofence
