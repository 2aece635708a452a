/*
 * Copyright 2026 The fogplace Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>
#include <random>

using namespace fogplace;

namespace {

topology roomy_cloud(std::mt19937_64& gen, std::size_t n_fog, std::size_t n_cloud, std::size_t n_services)
{
    auto topo = fixture::random_topology(gen, n_fog, n_cloud, n_services);
    for (auto& k : topo.cloud_servers)
    {
        k.mem_cap = 1e12;
        k.stor_cap = 1e13;
    }
    return topo;
}

bool feasible(const placement_state& p, const traffic_snapshot& snap, const topology& topo)
{
    return check_constraints(p, compute_load(p, snap, topo), topo).empty();
}

/// Request-weighted share of requests expected to exceed their threshold.
double violation_share(const placement_state& p, const traffic_snapshot& snap, const topology& topo)
{
    auto const load = compute_load(p, snap, topo);
    auto const rep = compute_delays(p, snap, load, topo, delay_params{});
    double num = 0, den = 0;
    for (std::size_t i = 0; i < snap.rates.size(); ++i)
    {
        num += snap.rates.data()[i] * rep.violation_prob.data()[i];
        den += snap.rates.data()[i];
    }
    return den > 0 ? num / den : 0.0;
}

} // namespace

TEST(AllCloud, NothingOnFogAndReleaseRuleHolds)
{
    std::mt19937_64 gen(1);
    for (int trial = 0; trial < 50; ++trial)
    {
        auto const topo = roomy_cloud(gen, 4, 2, 6);
        auto const snap = fixture::random_snapshot(gen, topo);
        auto const p = all_cloud(topo, snap);
        EXPECT_EQ(p.fog_count(), 0u);
        for (std::size_t s = 0; s < 6; ++s)
        {
            double fwd = 0;
            for (std::size_t f = 0; f < 4; ++f) fwd += snap.rates(s, f);
            bool any = false;
            for (std::size_t k = 0; k < 2; ++k) any = any || p.cloud(s, k);
            EXPECT_EQ(any, fwd > 0);
        }
        EXPECT_EQ(all_cloud(topo, snap), p);
    }
}

TEST(AllCloud, NotCheaperThanOptimum)
{
    fixture::tiny t;
    auto const prev = new_placement(t.topo);
    auto const truth = oracle::enumerate(t.topo, t.snap, prev, t.rates, t.delays.d_max_ms, t.delays.startup_ms);
    auto const p = all_cloud(t.topo, t.snap);
    EXPECT_GE(total_cost(p, prev, t.snap, t.topo, t.rates, t.delays).total, truth.best_cost);
}

TEST(AllCloud, ThrowsWhenCloudTooSmall)
{
    fixture::tiny t;
    t.topo.cloud_servers[0].stor_cap = 1.2e9;
    EXPECT_THROW(all_cloud(t.topo, t.snap), capacity_error);
}

TEST(MinViol, ZeroTrafficDeploysNothing)
{
    fixture::tiny t;
    auto const snap = zero_snapshot(t.topo);
    auto const p = min_viol(t.topo, snap, new_placement(t.topo));
    EXPECT_EQ(p.fog_count(), 0u);
    EXPECT_EQ(p.cloud_count(), 0u);
}

TEST(MinViol, HotServiceLandsOnItsNode)
{
    fixture::tiny t;
    auto snap = zero_snapshot(t.topo);
    snap.rates(1, 1) = 40;
    auto const p = min_viol(t.topo, snap, new_placement(t.topo));
    EXPECT_EQ(p.fog(1, 1), 1);
    EXPECT_EQ(p.fog_count(), 1u);
    EXPECT_TRUE(feasible(p, snap, t.topo));
}

TEST(MinViol, ReleasesColdServices)
{
    fixture::tiny t;
    auto prev = new_placement(t.topo);
    prev.fog(0, 0) = 1;
    auto snap = t.snap;
    snap.rates(0, 0) = 0.05; // below theta_down = 0.07
    auto const p = min_viol(t.topo, snap, prev);
    EXPECT_EQ(p.fog(0, 0), 0);
    snap.rates(0, 0) = 0.08; // between theta_down and theta_up: kept
    EXPECT_EQ(min_viol(t.topo, snap, prev).fog(0, 0), 1);
}

TEST(MinViol, NoWorseViolationThanAllCloud)
{
    std::mt19937_64 gen(3);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto const topo = roomy_cloud(gen, 3, 2, 4);
        auto const snap = fixture::random_snapshot(gen, topo, 6);
        auto const mv = min_viol(topo, snap, new_placement(topo));
        auto const ac = all_cloud(topo, snap);
        EXPECT_LE(violation_share(mv, snap, topo), violation_share(ac, snap, topo) + 1e-12);
        EXPECT_TRUE(feasible(mv, snap, topo));
    }
}

TEST(MinCost, NoCostlierThanAllCloud)
{
    std::mt19937_64 gen(5);
    cost_rates rates;
    for (int trial = 0; trial < 30; ++trial)
    {
        auto const topo = roomy_cloud(gen, 3, 2, 4);
        auto const snap = fixture::random_snapshot(gen, topo, 6);
        auto const prev = fixture::random_placement(gen, topo, snap, 0.3);
        auto const mc = min_cost(topo, snap, prev, rates);
        auto const ac = all_cloud(topo, snap);
        EXPECT_LE(total_cost(mc, prev, snap, topo, rates, {}).total, total_cost(ac, prev, snap, topo, rates, {}).total);
        EXPECT_TRUE(feasible(mc, snap, topo)) << trial;
    }
}

TEST(MinCost, FixedPointIsStable)
{
    std::mt19937_64 gen(7);
    cost_rates rates;
    for (int trial = 0; trial < 10; ++trial)
    {
        auto topo = roomy_cloud(gen, 3, 2, 4);
        for (auto& k : topo.cloud_servers) k.proc_cap = 1e6;
        auto const snap = fixture::random_snapshot(gen, topo, 6);
        auto const first = min_cost(topo, snap, new_placement(topo), rates);
        EXPECT_EQ(min_cost(topo, snap, first, rates).fog, first.fog);
    }
}

TEST(MinCost, EmptyTopology)
{
    topology topo;
    auto const snap = zero_snapshot(topo);
    auto const p = min_cost(topo, snap, new_placement(topo), cost_rates{});
    EXPECT_TRUE(p.fog.empty());
    EXPECT_TRUE(p.cloud.empty());
}

TEST(MinCost, ReachesOptimumOnTinyInstance)
{
    fixture::tiny t;
    auto const prev = new_placement(t.topo);
    auto const truth = oracle::enumerate(t.topo, t.snap, prev, t.rates, t.delays.d_max_ms, t.delays.startup_ms);
    auto const p = min_cost(t.topo, t.snap, prev, t.rates, t.delays);
    auto const c = total_cost(p, prev, t.snap, t.topo, t.rates, t.delays).total;
    EXPECT_GE(c, truth.best_cost - 1e-9 * std::abs(truth.best_cost));
}

TEST(PureBpso, NotBetterThanHybridOnTinyInstance)
{
    fixture::tiny t;
    auto const prev = new_placement(t.topo);
    double bpso = 0, hybrid = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed)
    {
        swarm_config cfg;
        cfg.seed = seed;
        auto const pb = pure_bpso(cfg, t.topo, t.snap, prev, t.rates, t.delays);
        bpso += total_cost(pb, prev, t.snap, t.topo, t.rates, t.delays).total;
        hybrid += solve(cfg, t.topo, t.snap, prev, t.rates, t.delays).cost;
        EXPECT_TRUE(feasible(pb, t.snap, t.topo));
    }
    EXPECT_GE(bpso / 10, hybrid / 10 - 1e-9 * std::abs(hybrid));
}

TEST(PureBpso, Deterministic)
{
    fixture::tiny t;
    auto const prev = new_placement(t.topo);
    swarm_config cfg;
    cfg.seed = 3;
    cfg.max_iter = 50;
    EXPECT_EQ(pure_bpso(cfg, t.topo, t.snap, prev, t.rates, t.delays),
              pure_bpso(cfg, t.topo, t.snap, prev, t.rates, t.delays));
}
