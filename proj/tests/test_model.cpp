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

#include <gtest/gtest.h>
#include <random>
#include <set>
#include <sstream>

using namespace fogplace;

TEST(NewPlacement, TinyTopologyIsAllZero)
{
    fixture::tiny t;
    auto const p = new_placement(t.topo);
    EXPECT_EQ(p.fog.rows(), 2u);
    EXPECT_EQ(p.fog.cols(), 2u);
    EXPECT_EQ(p.cloud.rows(), 2u);
    EXPECT_EQ(p.cloud.cols(), 1u);
    EXPECT_EQ(p.fog_count() + p.cloud_count(), 0u);
    EXPECT_EQ(p.timestamp, 0u);
}

TEST(NewPlacement, TableSizedTopology)
{
    auto const scn = build_scenario(preset("experiment1"));
    auto const p = new_placement(scn.topo);
    EXPECT_EQ(p.fog.rows(), 40u);
    EXPECT_EQ(p.fog.cols(), 10u);
    EXPECT_EQ(p.cloud.rows(), 40u);
    EXPECT_EQ(p.cloud.cols(), 3u);
}

TEST(NewPlacement, NoServicesGivesEmptyMatrices)
{
    topology topo;
    topo.fog_nodes = {fixture::fog_node(0, 1000)};
    topo.cloud_servers = {fixture::cloud_server(0, 20000)};
    topo.offload_target = matrix<std::size_t>(0, 1, 0);
    EXPECT_NO_THROW(validate(topo));
    auto const p = new_placement(topo);
    EXPECT_TRUE(p.fog.empty());
    EXPECT_TRUE(p.cloud.empty());
}

TEST(FlattenIndex, Examples)
{
    EXPECT_EQ(flatten_index(2, 3, 10, 5), 23u);
    EXPECT_EQ(unflatten_index(23, 10, 5), (std::pair<std::size_t, std::size_t>{2, 3}));
    EXPECT_EQ(flatten_index(0, 0, 4, 4), 0u);
    EXPECT_THROW(flatten_index(5, 0, 10, 5), std::out_of_range);
    EXPECT_THROW(flatten_index(0, 10, 10, 5), std::out_of_range);
    EXPECT_THROW(unflatten_index(50, 10, 5), std::out_of_range);
}

TEST(FlattenIndex, BijectionSevenByFive)
{
    std::set<std::size_t> seen;
    for (std::size_t s = 0; s < 5; ++s)
    {
        for (std::size_t f = 0; f < 7; ++f)
        {
            auto const i = flatten_index(s, f, 7, 5);
            EXPECT_LT(i, 35u);
            seen.insert(i);
            EXPECT_EQ(unflatten_index(i, 7, 5), (std::pair<std::size_t, std::size_t>{s, f}));
        }
    }
    EXPECT_EQ(seen.size(), 35u);
}

TEST(FlattenIndex, BijectionRandomSizes)
{
    std::mt19937_64 gen(11);
    std::uniform_int_distribution<std::size_t> size(1, 50);
    for (int trial = 0; trial < 30; ++trial)
    {
        auto const nf = size(gen), ns = size(gen);
        std::vector<int> hits(nf * ns, 0);
        for (std::size_t s = 0; s < ns; ++s)
            for (std::size_t f = 0; f < nf; ++f) ++hits[flatten_index(s, f, nf, ns)];
        for (auto h : hits) ASSERT_EQ(h, 1);
    }
}

TEST(Validate, RejectsBrokenSpecs)
{
    auto s = fixture::service(0, 100);
    s.qos_level = 1.0;
    EXPECT_THROW(validate(s), std::invalid_argument);
    s = fixture::service(0, 0);
    EXPECT_THROW(validate(s), std::invalid_argument);
    auto f = fixture::fog_node(0, 1000);
    f.fsc_rate = 0;
    EXPECT_THROW(validate(f), std::invalid_argument);
    fixture::tiny t;
    t.topo.offload_target(1, 1) = 3;
    EXPECT_THROW(validate(t.topo), std::invalid_argument);
}

TEST(PlacementText, RoundTrip)
{
    std::mt19937_64 gen(5);
    for (int trial = 0; trial < 20; ++trial)
    {
        auto const topo = fixture::random_topology(gen, 1 + trial % 4, 1 + trial % 3, trial % 5);
        auto const snap = fixture::random_snapshot(gen, topo);
        auto p = fixture::random_placement(gen, topo, snap);
        p.timestamp = static_cast<std::size_t>(trial);
        std::istringstream in(to_string(p));
        EXPECT_EQ(read_placement(in), p);
    }
}

TEST(PlacementText, RejectsGarbage)
{
    std::istringstream bad("placement 1 2 1 0\nfog\n0x\ncloud\n0\n");
    EXPECT_THROW(read_placement(bad), std::runtime_error);
    std::istringstream header("nonsense");
    EXPECT_THROW(read_placement(header), std::runtime_error);
}
