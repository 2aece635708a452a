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

#include <fogplace/fogplace.hpp>
#include <gtest/gtest.h>
#include <filesystem>
#include <sstream>

using namespace fogplace;

namespace {

scenario_config parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_scenario(in);
}

std::string error_of(const std::string& text)
{
    try
    {
        parse(text);
    }
    catch (const scenario_error& e)
    {
        return e.what();
    }
    return "";
}

} // namespace

TEST(Preset, TableSizes)
{
    auto const e1 = build_scenario(preset("experiment1"));
    EXPECT_EQ(e1.topo.n_fog(), 10u);
    EXPECT_EQ(e1.topo.n_cloud(), 3u);
    EXPECT_EQ(e1.topo.n_services(), 40u);
    auto const e2 = build_scenario(preset("experiment2"));
    EXPECT_EQ(e2.topo.n_fog(), 10u);
    EXPECT_EQ(e2.topo.n_cloud(), 5u);
    EXPECT_EQ(e2.topo.n_services(), 50u);
    auto const e3 = preset("experiment3");
    EXPECT_EQ(e3.n_services, 20u);
    EXPECT_EQ(e3.tau_s, 10.0);
    EXPECT_EQ(e3.traffic_period_s, 10.0);
    EXPECT_THROW(preset("experiment9"), scenario_error);
}

TEST(BuildScenario, SampledWithinConfiguredRanges)
{
    auto const scn = build_scenario(preset("experiment2"));
    for (auto const& f : scn.topo.fog_nodes)
    {
        EXPECT_GE(f.proc_cap, 800.0);
        EXPECT_LE(f.proc_cap, 1300.0);
        EXPECT_GE(f.prop_cloud_ms, 15.0);
        EXPECT_LE(f.prop_cloud_ms, 35.0);
        EXPECT_GE(f.mem_cap, 4e9);
        EXPECT_LE(f.mem_cap, 16e9);
        EXPECT_DOUBLE_EQ(f.fsc_rate, 1.25e9);
    }
    for (auto const& k : scn.topo.cloud_servers)
    {
        EXPECT_GE(k.proc_cap, 16000.0);
        EXPECT_LE(k.proc_cap, 26000.0);
    }
    for (auto const& s : scn.topo.services)
    {
        EXPECT_GE(s.proc_demand, 50.0);
        EXPECT_LE(s.proc_demand, 200.0);
        EXPECT_GE(s.delay_threshold, 10.0);
        EXPECT_LE(s.delay_threshold, 15.0);
        EXPECT_GE(s.qos_level, 0.8);
        EXPECT_LE(s.qos_level, 0.99);
    }
    ASSERT_EQ(scn.rates.c_viol_per_service.size(), 50u);
    for (auto c : scn.rates.c_viol_per_service)
    {
        EXPECT_GE(c, 100.0);
        EXPECT_LE(c, 200.0);
    }
    EXPECT_EQ(scn.delays.d_max_ms, default_d_max(scn.topo.services));
    EXPECT_EQ(scn.delays.startup_ms, 50.0);
}

TEST(BuildScenario, SeedDeterminism)
{
    auto cfg = preset("experiment1");
    auto const a = build_scenario(cfg);
    auto const b = build_scenario(cfg);
    EXPECT_EQ(a.topo.fog_nodes.front().proc_cap, b.topo.fog_nodes.front().proc_cap);
    EXPECT_EQ(a.topo.offload_target, b.topo.offload_target);
    EXPECT_EQ(a.rates.c_viol_per_service, b.rates.c_viol_per_service);
    EXPECT_EQ(make_schedule(a), make_schedule(b));
    cfg.seed = 2;
    auto const c = build_scenario(cfg);
    EXPECT_NE(a.topo.fog_nodes.front().proc_cap, c.topo.fog_nodes.front().proc_cap);
}

TEST(ParseScenario, FullFile)
{
    auto const c = parse(R"(
; comment
[scenario]
name = demo
seed = 7
n_intervals = 12
tau_s = 60
traffic_period_s = 30
d_max_ms = 200
stall_on_deploy = true

[services]
count = 6
proc_mi = 5 10
threshold_ms = 20

[fog_nodes]
count = 3
proc_mips = 900 1000

[cloud_servers]
count = 2

[costs]
c_proc = 0.001
c_viol = 120 130

[optimizer]
n_particles = 10
max_iter = 50
velocity = -1 4
alpha = 0.8 0.4
invert_inter_prob = yes

[traffic]
profile = spiky
base_rate = 3

[baselines]
theta_up = 0.5
)");
    EXPECT_EQ(c.name, "demo");
    EXPECT_EQ(c.seed, 7u);
    EXPECT_EQ(c.n_intervals, 12u);
    EXPECT_EQ(c.tau_s, 60.0);
    EXPECT_EQ(c.rates.tau_s, 60.0);
    EXPECT_EQ(c.traffic.traffic_period_s, 30.0);
    EXPECT_EQ(c.d_max_ms.value(), 200.0);
    EXPECT_TRUE(c.stall_on_deploy);
    EXPECT_EQ(c.n_services, 6u);
    EXPECT_EQ(c.proc_mi, (value_range{5, 10}));
    EXPECT_EQ(c.threshold_ms, (value_range{20, 20}));
    EXPECT_EQ(c.fog_proc_mips, (value_range{900, 1000}));
    EXPECT_EQ(c.n_cloud, 2u);
    EXPECT_EQ(c.rates.c_proc, 0.001);
    EXPECT_EQ(c.c_viol, (value_range{120, 130}));
    EXPECT_EQ(c.swarm.n_particles, 10u);
    EXPECT_EQ(c.swarm.v_min, -1.0);
    EXPECT_EQ(c.swarm.v_max, 4.0);
    EXPECT_EQ(c.swarm.alpha_i, 0.8);
    EXPECT_EQ(c.swarm.alpha_f, 0.4);
    EXPECT_TRUE(c.swarm.invert_inter_prob);
    EXPECT_EQ(c.traffic.profile, traffic_profile::spiky);
    EXPECT_EQ(c.min_viol.theta_up, 0.5);

    auto const scn = build_scenario(c);
    EXPECT_EQ(scn.delays.d_max_ms, 200.0);
    auto const sched = make_schedule(scn);
    EXPECT_EQ(sched.snapshots.size(), 12u);
    EXPECT_EQ(sched.traffic_period_s, 30.0);
}

TEST(ParseScenario, PresetFillsCounts)
{
    auto const c = parse("[scenario]\npreset = experiment2\nseed = 3\n[optimizer]\nmax_iter = 10\n");
    EXPECT_EQ(c.n_services, 50u);
    EXPECT_EQ(c.n_cloud, 5u);
    EXPECT_EQ(c.seed, 3u);
    EXPECT_EQ(c.swarm.max_iter, 10u);
}

TEST(ParseScenario, MissingKeyIsNamed)
{
    EXPECT_NE(error_of("[fog_nodes]\ncount = 2\n[cloud_servers]\ncount = 1\n").find("services.count"),
              std::string::npos);
    EXPECT_NE(error_of("[services]\ncount = 2\n[cloud_servers]\ncount = 1\n").find("fog_nodes.count"),
              std::string::npos);
}

TEST(ParseScenario, Rejections)
{
    std::string const base = "[services]\ncount = 2\n[fog_nodes]\ncount = 2\n[cloud_servers]\ncount = 1\n";
    EXPECT_NE(error_of(base + "[bogus]\nx = 1\n").find("unknown section"), std::string::npos);
    EXPECT_NE(error_of(base + "[costs]\nc_prok = 1\n").find("unknown key 'c_prok'"), std::string::npos);
    EXPECT_NE(error_of(base + "[costs]\nc_proc = abc\n").find("c_proc"), std::string::npos);
    EXPECT_NE(error_of(base + "[optimizer]\nvelocity = 1 2 3\n").find("velocity"), std::string::npos);
    EXPECT_NE(error_of(base + "[optimizer]\nvelocity = 5 1\n").find("v_min"), std::string::npos);
    EXPECT_NE(error_of(base + "[traffic]\nprofile = square\n").find("profile"), std::string::npos);
    EXPECT_NE(error_of(base + "[scenario]\nstall_on_deploy = maybe\n").find("stall_on_deploy"), std::string::npos);
    EXPECT_NE(error_of("[services]\ncount = 2\nproc_mi = 9 3\n[fog_nodes]\ncount = 2\n[cloud_servers]\ncount = 1\n")
                  .find("proc_mi"),
              std::string::npos);
    EXPECT_NE(error_of("[services]\ncount = 2\n[fog_nodes]\ncount = 2\n[cloud_servers]\ncount = 0\n").find("cloud"),
              std::string::npos);
    EXPECT_THROW(load_scenario("/nonexistent/scenario.ini"), scenario_error);
}

TEST(BundledScenarios, AllParseAndBuild)
{
    std::size_t seen = 0;
    for (auto const& entry : std::filesystem::directory_iterator(FOGPLACE_SCENARIO_DIR))
    {
        if (entry.path().extension() != ".ini") continue;
        ++seen;
        auto const cfg = load_scenario(entry.path().string());
        auto const scn = build_scenario(cfg);
        EXPECT_NO_THROW(validate(scn.topo)) << entry.path();
        EXPECT_EQ(make_schedule(scn).snapshots.size(), cfg.n_intervals) << entry.path();
    }
    EXPECT_GE(seen, 5u);
}

TEST(BundledScenarios, OrderingFileMatchesItsDescription)
{
    auto const c = load_scenario(std::string(FOGPLACE_SCENARIO_DIR) + "/ordering.ini");
    EXPECT_EQ(c.n_fog, 10u);
    EXPECT_EQ(c.n_cloud, 3u);
    EXPECT_EQ(c.n_services, 20u);
    EXPECT_EQ(c.n_intervals, 60u);
    EXPECT_EQ(c.traffic.profile, traffic_profile::diurnal);
    EXPECT_EQ(c.min_viol.theta_up, 35.0);
}
