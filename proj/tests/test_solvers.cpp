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

#include <catch_amalgamated.hpp>

#include <random>

#include "geofence/error.hpp"
#include "geofence/solvers.hpp"
#include "oracle.hpp"

using namespace geofence;
using Catch::Approx;

TEST_CASE("exact solver matches brute force") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 40; ++k) {
        const auto in = oracle::random_instance(rng, k % 2 ? 4 : 2);
        const auto model = oracle::to_model(in);
        const auto truth = oracle::brute_force(in);
        if (!truth) {
            CHECK_THROWS_AS(solve_exact(model), Error);
            continue;
        }
        const auto r = solve_exact(model);
        REQUIRE(r.feasible);
        CHECK(oracle::feasible(oracle::to_bits(r.x), in));
        CHECK(r.breakdown.total == Approx(*truth).margin(1e-9));
        CHECK(r.solver_id == "exact");
    }
}

TEST_CASE("exact solver refuses large models") {
    const auto model = build_model(Grid<double>(8, 0.5), {0, 0}, {}, std::nullopt);
    CHECK_THROWS_AS(solve_exact(model), Error);
}

TEST_CASE("flip bookkeeping tracks the energy") {
    std::mt19937_64 rng(17);
    const auto in = oracle::random_instance(rng, 8);
    const auto model = oracle::to_model(in);
    CompiledQubo qubo(model);
    FlipState state(qubo, Selection(8, 0));
    for (int k = 0; k < 500; ++k) {
        const std::size_t i = rng() % model.n;
        const double before = state.energy();
        const double predicted = state.delta(i);
        state.flip(i);
        CHECK(state.energy() - before == Approx(predicted).margin(1e-9));
    }
    CHECK(state.energy() == Approx(model.energy(state.x())).margin(1e-9));
    std::size_t on = 0, off = 0;
    while (!state.selected(on)) ++on;
    while (state.selected(off)) ++off;
    Selection swapped = state.x();
    swapped[on] = 0;
    swapped[off] = 1;
    CHECK(state.swap_delta(on, off) == Approx(model.energy(swapped) - state.energy()).margin(1e-9));
}

TEST_CASE("anneal is deterministic and feasible") {
    std::mt19937_64 rng(23);
    auto in = oracle::random_instance(rng, 8);
    in.window = true;
    in.wmin = 5;
    in.wmax = 10;
    for (auto& f : in.fixed) f = -1;
    const auto model = oracle::to_model(in);
    AnnealSchedule s;
    s.seed = 9;
    s.sweeps = 300;
    const auto a = solve_anneal(model, s);
    const auto b = solve_anneal(model, s);
    CHECK(a.x == b.x);
    CHECK(a.feasible);
    CHECK(oracle::feasible(oracle::to_bits(a.x), in));
    AnnealTrace trace;
    s.trace = &trace;
    s.restarts = 1;
    solve_anneal(model, s);
    CHECK_FALSE(trace.accepted_energies.empty());
}

TEST_CASE("repair and local search restore the window and never worsen") {
    Grid<double> v(4, 0.0);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i % 5) / 4.0;
    const auto model = build_model(v, {1, 1}, {}, AreaWindow{3, 5});
    const auto repaired_up = repair(Selection(4, 0), model);
    CHECK(is_feasible(model, repaired_up));
    const auto repaired_down = repair(Selection(4, 1), model);
    CHECK(is_feasible(model, repaired_down));
    const auto polished = local_search(repaired_down, model);
    CHECK(is_feasible(model, polished));
    CHECK(model.energy(polished) <= model.energy(repaired_down) + 1e-12);
    const auto greedy = greedy_baseline(model);
    CHECK(is_feasible(model, greedy));
}

TEST_CASE("unreachable windows are reported") {
    ModelFlags flags;
    flags.forbidden_cells = {0, 1, 2};
    const auto model = build_model(Grid<double>(2, 0.5), {1, 1}, {}, AreaWindow{2, 4}, flags);
    CHECK_THROWS_AS(check_window_reachable(model), Error);
    try {
        solve_anneal(model);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::infeasible);
    }
}

TEST_CASE("auto picks exact for small models") {
    const auto small = build_model(Grid<double>(4, 0.5), {0, 0}, {}, AreaWindow{0, 4});
    AnnealSchedule s;
    s.sweeps = 50;
    CHECK(solve_auto(small, s).solver_id == "exact");
    const auto big = build_model(Grid<double>(8, 0.5), {0, 0}, {}, AreaWindow{0, 9});
    CHECK(solve_auto(big, s).solver_id == "anneal");
}

TEST_CASE("hierarchical solution stays inside the dilated coarse region") {
    Grid<double> fine(16, 0.0);
    for (int r = 0; r < 16; ++r)
        for (int c = 0; c < 16; ++c) fine(r, c) = std::exp(-((r - 10) * (r - 10) + (c - 5) * (c - 5)) / 12.0);
    HierarchicalConfig cfg;
    cfg.schedule.sweeps = 200;
    cfg.schedule.seed = 4;
    const auto res = solve_hierarchical(fine, {10, 5}, cfg);
    REQUIRE(res.fine.feasible);
    for (std::size_t i = 0; i < res.fine.x.size(); ++i)
        if (res.fine.x[i]) CHECK(res.region[i] == 1);
    const auto coarse = coarsen_max(fine, 2);
    CHECK(coarse.side() == 4);
    double peak = 0;
    for (double v : coarse.raw()) peak = std::max(peak, v);
    CHECK(peak == 1.0);
}
