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

#include <filesystem>
#include <fogplace/cli.hpp>
#include <fstream>
#include <gtest/gtest.h>
#include <sstream>

using namespace fogplace;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        auto const* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir = fs::temp_directory_path() / (std::string("fogplace_cli_") + info->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
        scenario_path = (dir / "small.ini").string();
        std::ofstream(scenario_path) << "[scenario]\nname = small\nseed = 3\nn_intervals = 4\ntau_s = 60\n"
                                        "[services]\ncount = 4\nproc_mi = 1 2\n"
                                        "[fog_nodes]\ncount = 3\n"
                                        "[cloud_servers]\ncount = 1\n"
                                        "[optimizer]\nn_particles = 6\nmax_iter = 30\n"
                                        "[traffic]\nbase_rate = 15\nheterogeneity = 0.4\n";
    }

    void TearDown() override { fs::remove_all(dir); }

    int cli(std::vector<std::string> args)
    {
        args.insert(args.begin(), "fogplace");
        std::vector<const char*> argv;
        for (auto const& a : args) argv.push_back(a.c_str());
        out.str("");
        err.str("");
        return cli::main(static_cast<int>(argv.size()), argv.data(), out, err);
    }

    static std::string slurp(const fs::path& p)
    {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    static std::vector<std::string> lines(const std::string& text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string l; std::getline(in, l);)
            if (!l.empty()) out.push_back(l);
        return out;
    }

    fs::path dir;
    std::string scenario_path;
    std::ostringstream out, err;
};

} // namespace

TEST_F(CliTest, CompareWritesOneRowPerPolicy)
{
    auto const o = (dir / "cmp").string();
    ASSERT_EQ(cli({"compare", "--scenario", scenario_path, "--policy", "all_cloud,hbpcro", "--seeds", "3", "--out", o}),
              0)
        << err.str();
    auto const rows = lines(slurp(fs::path(o) / "comparison.csv"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].rfind("all_cloud,3,", 0), 0u);
    EXPECT_EQ(rows[2].rfind("hbpcro,3,", 0), 0u);
    for (int seed = 1; seed <= 3; ++seed)
    {
        EXPECT_TRUE(fs::exists(fs::path(o) / ("metrics_hbpcro_seed" + std::to_string(seed) + ".csv")));
    }
    for (auto const* f : {"summary.txt", "cost_series.csv", "delay_series.csv", "violation_series.csv"})
    {
        EXPECT_TRUE(fs::exists(fs::path(o) / f)) << f;
    }
    EXPECT_EQ(lines(slurp(fs::path(o) / "cost_series.csv")).size(), 5u);
    EXPECT_NE(out.str().find("hbpcro (3 runs)"), std::string::npos);
}

TEST_F(CliTest, MeansMatchLibraryRuns)
{
    auto const o = (dir / "cmp").string();
    ASSERT_EQ(cli({"compare", "--scenario", scenario_path, "--policy", "min_cost", "--seeds", "2", "--out", o}), 0);
    auto const scn = build_scenario(load_scenario(scenario_path));
    auto const rows = compare(scn, make_schedule(scn), {policy_kind::min_cost}, 2);
    std::ostringstream want;
    cli::write_comparison_csv(want, rows);
    EXPECT_EQ(slurp(fs::path(o) / "comparison.csv"), want.str());
}

TEST_F(CliTest, SweepProducesTwentyPoints)
{
    auto const o = (dir / "sweep").string();
    ASSERT_EQ(cli({"sweep", "--scenario", scenario_path, "--policy", "min_viol", "--thresholds", "1:100:5", "--out", o}),
              0)
        << err.str();
    auto const rows = lines(slurp(fs::path(o) / "threshold_sweep.csv"));
    EXPECT_EQ(rows.size(), 21u);
    EXPECT_EQ(rows[1].rfind("1,min_viol,", 0), 0u);
    EXPECT_EQ(rows.back().rfind("96,min_viol,", 0), 0u);
}

TEST_F(CliTest, MetricsAndTraceRoundTrip)
{
    auto const o = fs::path(dir / "rt");
    ASSERT_EQ(cli({"run", "--scenario", scenario_path, "--policy", "min_cost", "--out", o.string()}), 0) << err.str();
    std::ifstream metrics(o / "metrics_min_cost_seed1.csv");
    auto const rows = read_metrics_csv(metrics);
    auto const scn = build_scenario(load_scenario(scenario_path));
    EXPECT_EQ(rows, run(scn, make_schedule(scn), policy_kind::min_cost, 1).per_interval);

    ASSERT_EQ(cli({"trace", "--scenario", scenario_path, "--out", o.string()}), 0) << err.str();
    std::ifstream trace(o / "trace.csv");
    trace_options opts;
    opts.traffic_period_s = scn.config.traffic_period_s;
    EXPECT_EQ(parse_trace(trace, scn.topo, opts), make_schedule(scn));

    auto const o2 = dir / "replay";
    ASSERT_EQ(cli({"run", "--scenario", scenario_path, "--policy", "min_cost", "--trace", (o / "trace.csv").string(),
                   "--out", o2.string()}),
              0)
        << err.str();
    EXPECT_EQ(slurp(o2 / "metrics_min_cost_seed1.csv"), slurp(o / "metrics_min_cost_seed1.csv"));
}

TEST_F(CliTest, Reproducible)
{
    auto const a = (dir / "a").string(), b = (dir / "b").string();
    ASSERT_EQ(cli({"compare", "--scenario", scenario_path, "--policy", "bpso,hbpcro", "--seeds", "2", "--out", a}), 0);
    ASSERT_EQ(cli({"compare", "--scenario", scenario_path, "--policy", "bpso,hbpcro", "--seeds", "2", "--jobs", "2",
                   "--out", b}),
              0);
    for (auto const& entry : fs::directory_iterator(a))
    {
        EXPECT_EQ(slurp(entry.path()), slurp(fs::path(b) / entry.path().filename())) << entry.path();
    }
}

TEST_F(CliTest, SearchWritesTrials)
{
    auto const o = (dir / "search").string();
    ASSERT_EQ(cli({"search", "--scenario", scenario_path, "--intervals", "1", "--trials", "3", "--gamma", "2:4",
                   "--particles", "5:8", "--out", o}),
              0)
        << err.str();
    EXPECT_EQ(lines(slurp(fs::path(o) / "search_trials.csv")).size(), 4u);
}

TEST_F(CliTest, EnvironmentOutputDirectory)
{
    auto const o = dir / "env";
    ::setenv("FOGPLACE_OUT", o.c_str(), 1);
    auto const rc = cli({"trace", "--scenario", scenario_path});
    ::unsetenv("FOGPLACE_OUT");
    ASSERT_EQ(rc, 0) << err.str();
    EXPECT_TRUE(fs::exists(o / "trace.csv"));
}

TEST_F(CliTest, Errors)
{
    auto const o = (dir / "err").string();
    EXPECT_NE(cli({"run", "--scenario", (dir / "missing.ini").string(), "--out", o}), 0);
    EXPECT_NE(cli({"run", "--scenario", scenario_path, "--policy", "magic", "--out", o}), 0);
    EXPECT_NE(err.str().find("unknown policy"), std::string::npos);
    EXPECT_NE(cli({"run", "--scenario", scenario_path, "--policy", "bpso,hbpcro", "--out", o}), 0);
    EXPECT_NE(cli({"sweep", "--scenario", scenario_path, "--thresholds", "1:2", "--out", o}), 0);
    EXPECT_NE(cli({"frobnicate"}), 0);
    EXPECT_NE(cli({"run", "--preset", "experiment7", "--out", o}), 0);

    std::ofstream(dir / "bad.ini") << "[services]\ncount = 2\n";
    EXPECT_NE(cli({"run", "--scenario", (dir / "bad.ini").string(), "--out", o}), 0);
    EXPECT_NE(err.str().find("fog_nodes.count"), std::string::npos);
}
