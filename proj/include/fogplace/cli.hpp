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

/**
 * \file fogplace/cli.hpp
 *
 * \brief The fogplace command line, kept in a header so tests can drive it.
 *
 * Subcommands: run, compare, sweep, search, trace. Output files go to
 * --out, or $FOGPLACE_OUT, or ./fogplace-out.
 */

#ifndef FOGPLACE_CLI_HPP
#define FOGPLACE_CLI_HPP

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fogplace/scenario.hpp>
#include <fogplace/sim.hpp>
#include <fogplace/text.hpp>
#include <fogplace/traffic.hpp>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace fogplace::cli {

struct common_options
{
    std::string scenario_path;
    std::string preset_name = "experiment1";
    std::string trace_path;
    bool synthetic = false;
    std::uint64_t scenario_seed = 0; ///< 0 keeps the file's seed
    std::size_t intervals = 0; ///< 0 keeps the file's count
    std::string out_dir;
};

inline std::filesystem::path output_dir(const common_options& o)
{
    if (!o.out_dir.empty()) return o.out_dir;
    if (auto const* env = std::getenv("FOGPLACE_OUT"); env && *env) return env;
    return "fogplace-out";
}

inline scenario load(const common_options& o)
{
    auto cfg = o.scenario_path.empty() ? preset(o.preset_name) : load_scenario(o.scenario_path);
    if (o.scenario_seed != 0) cfg.seed = o.scenario_seed;
    if (o.intervals != 0) cfg.n_intervals = o.intervals;
    return build_scenario(cfg);
}

inline trace_schedule schedule(const common_options& o, const scenario& scn)
{
    if (o.trace_path.empty())
    {
        return make_schedule(scn);
    }
    std::ifstream in(o.trace_path);
    if (!in) throw std::runtime_error("cannot open trace file '" + o.trace_path + "'");
    auto sched = parse_trace(in, scn.topo, {scn.config.traffic_period_s, scn.config.seed});
    validate(sched, scn.topo);
    return sched;
}

inline std::vector<policy_kind> parse_policies(const std::string& list)
{
    std::vector<policy_kind> out;
    for (auto tok : split(list, ','))
    {
        auto const name = trim(tok);
        if (!name.empty()) out.push_back(parse_policy(name));
    }
    if (out.empty()) throw std::invalid_argument("no policy given");
    return out;
}

/// "lo:hi:step", hi exclusive.
inline std::vector<double> parse_thresholds(const std::string& spec)
{
    auto const parts = split(spec, ':');
    if (parts.size() != 3) throw std::invalid_argument("thresholds must be lo:hi:step");
    auto lo = parse_double(parts[0]), hi = parse_double(parts[1]), step = parse_double(parts[2]);
    if (!lo || !hi || !step) throw std::invalid_argument("thresholds must be lo:hi:step");
    return threshold_range(*lo, *hi, *step);
}

inline std::pair<std::size_t, std::size_t> parse_span(const std::string& spec)
{
    auto const parts = split(spec, ':');
    if (parts.size() != 2) throw std::invalid_argument("expected lo:hi, got '" + spec + "'");
    auto lo = parse_uint(parts[0]), hi = parse_uint(parts[1]);
    if (!lo || !hi || *lo > *hi) throw std::invalid_argument("expected lo:hi, got '" + spec + "'");
    return {static_cast<std::size_t>(*lo), static_cast<std::size_t>(*hi)};
}

inline std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    return os;
}

inline void write_summary(std::ostream& os, const scenario& scn, const std::vector<comparison_row>& rows)
{
    os << "scenario " << scn.config.name << " seed " << scn.config.seed << " fog " << scn.topo.n_fog() << " cloud "
       << scn.topo.n_cloud() << " services " << scn.topo.n_services() << '\n';
    for (auto const& r : rows)
    {
        auto field = [&](const char* name, const metric_stats& st) {
            os << "  " << name << ' ' << format_double(st.mean) << " +- " << format_double(st.stddev) << '\n';
        };
        os << r.policy << " (" << r.runs.size() << " runs)\n";
        field("total_cost", r.total_cost);
        field("avg_service_delay_ms", r.avg_service_delay_ms);
        field("mean_service_delay_ms", r.mean_service_delay_ms);
        field("delay_violation_pct", r.delay_violation_pct);
        field("n_fog_deployments", r.n_fog_deployments);
        field("n_cloud_deployments", r.n_cloud_deployments);
    }
}

inline void write_comparison_csv(std::ostream& os, const std::vector<comparison_row>& rows)
{
    os << "policy,runs,total_cost_mean,total_cost_std,avg_delay_ms_mean,avg_delay_ms_std,mean_delay_ms_mean,"
          "mean_delay_ms_std,violation_pct_mean,violation_pct_std,fog_deployments_mean,fog_deployments_std,"
          "cloud_deployments_mean,cloud_deployments_std\n";
    for (auto const& r : rows)
    {
        os << r.policy << ',' << r.runs.size();
        for (auto const* st : {&r.total_cost, &r.avg_service_delay_ms, &r.mean_service_delay_ms, &r.delay_violation_pct,
                               &r.n_fog_deployments, &r.n_cloud_deployments})
        {
            os << ',' << format_double(st->mean) << ',' << format_double(st->stddev);
        }
        os << '\n';
    }
}

/// Per-interval series averaged over seeds, one column per policy.
inline void write_series_csv(std::ostream& os, const std::vector<comparison_row>& rows,
                             double interval_metrics::*field)
{
    os << "interval";
    for (auto const& r : rows) os << ',' << r.policy;
    os << '\n';
    if (rows.empty() || rows.front().runs.empty()) return;
    auto const n = rows.front().runs.front().per_interval.size();
    for (std::size_t i = 0; i < n; ++i)
    {
        os << rows.front().runs.front().per_interval[i].interval;
        for (auto const& r : rows)
        {
            double sum = 0;
            for (auto const& run : r.runs) sum += run.per_interval[i].*field;
            os << ',' << format_double(sum / static_cast<double>(r.runs.size()));
        }
        os << '\n';
    }
}

inline void emit_comparison(const std::filesystem::path& dir, const scenario& scn,
                            const std::vector<comparison_row>& rows)
{
    std::filesystem::create_directories(dir);
    for (auto const& r : rows)
    {
        for (auto const& run : r.runs)
        {
            auto os = open_out(dir / ("metrics_" + r.policy + "_seed" + std::to_string(run.seed) + ".csv"));
            write_metrics_csv(os, run.per_interval);
        }
    }
    {
        auto os = open_out(dir / "comparison.csv");
        write_comparison_csv(os, rows);
    }
    {
        auto os = open_out(dir / "summary.txt");
        write_summary(os, scn, rows);
    }
    {
        auto os = open_out(dir / "cost_series.csv");
        write_series_csv(os, rows, &interval_metrics::total_cost);
    }
    {
        auto os = open_out(dir / "delay_series.csv");
        write_series_csv(os, rows, &interval_metrics::avg_service_delay_ms);
    }
    {
        auto os = open_out(dir / "violation_series.csv");
        write_series_csv(os, rows, &interval_metrics::delay_violation_pct);
    }
}

inline void write_sweep_csv(std::ostream& os, const std::vector<std::pair<std::string, std::vector<sweep_point>>>& curves)
{
    os << "threshold_ms,policy,delay_violation_pct,n_fog_deployments,n_cloud_deployments,avg_service_delay_ms,"
          "total_cost\n";
    for (auto const& [policy, points] : curves)
    {
        for (auto const& pt : points)
        {
            auto const& a = pt.result.aggregates;
            os << format_double(pt.threshold_ms) << ',' << policy << ',' << format_double(a.delay_violation_pct) << ','
               << format_double(a.n_fog_deployments) << ',' << format_double(a.n_cloud_deployments) << ','
               << format_double(a.avg_service_delay_ms) << ',' << format_double(a.total_cost) << '\n';
        }
    }
}

inline void write_search_csv(std::ostream& os, const std::vector<trial_record>& trials)
{
    os << "gamma,n_particles,avg_service_delay_ms,delay_violation_pct,total_cost\n";
    for (auto const& t : trials)
    {
        os << t.gamma << ',' << t.n_particles << ',' << format_double(t.avg_service_delay_ms) << ','
           << format_double(t.delay_violation_pct) << ',' << format_double(t.total_cost) << '\n';
    }
}

/// Entry point; returns the process exit code.
inline int main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    CLI::App app{"QoS-aware fog-cloud service placement simulator"};
    app.require_subcommand(1);

    common_options common;
    auto add_common = [&](CLI::App* sub) {
        auto* sc = sub->add_option("--scenario", common.scenario_path, "scenario INI file")->check(CLI::ExistingFile);
        sub->add_option("--preset", common.preset_name, "built-in scenario: experiment1|experiment2|experiment3")
            ->excludes(sc);
        auto* tr = sub->add_option("--trace", common.trace_path, "trace CSV")->check(CLI::ExistingFile);
        sub->add_flag("--synthetic", common.synthetic, "synthesize traffic from the scenario (default)")->excludes(tr);
        sub->add_option("--scenario-seed", common.scenario_seed, "override the scenario seed");
        sub->add_option("--intervals", common.intervals, "override the number of synthetic intervals");
        sub->add_option("--out", common.out_dir, "output directory");
    };

    std::string policy_list = "hbpcro";
    std::size_t n_seeds = 1;
    std::uint64_t first_seed = 1;
    std::size_t jobs = 1;
    std::string thresholds = "1:101:5";
    std::size_t trials = 20;
    std::string gamma_span = "2:10";
    std::string particles_span = "5:50";
    std::string trace_out;

    auto* run_cmd = app.add_subcommand("run", "simulate one policy");
    add_common(run_cmd);
    run_cmd->add_option("--policy", policy_list, "all_cloud|min_viol|min_cost|bpso|hbpcro");
    run_cmd->add_option("--seed", first_seed, "optimizer seed");

    auto* cmp_cmd = app.add_subcommand("compare", "compare policies over several seeds");
    add_common(cmp_cmd);
    cmp_cmd->add_option("--policy", policy_list, "comma-separated policies");
    cmp_cmd->add_option("--seeds", n_seeds, "number of seeds")->check(CLI::PositiveNumber);
    cmp_cmd->add_option("--first-seed", first_seed, "first seed");
    cmp_cmd->add_option("--jobs", jobs, "concurrent runs")->check(CLI::PositiveNumber);

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep the delay threshold of every service");
    add_common(sweep_cmd);
    sweep_cmd->add_option("--policy", policy_list, "comma-separated policies");
    sweep_cmd->add_option("--thresholds", thresholds, "lo:hi:step in ms, hi exclusive");
    sweep_cmd->add_option("--seed", first_seed, "optimizer seed");

    auto* search_cmd = app.add_subcommand("search", "random search over gamma and swarm size");
    add_common(search_cmd);
    search_cmd->add_option("--trials", trials, "number of trials");
    search_cmd->add_option("--gamma", gamma_span, "lo:hi");
    search_cmd->add_option("--particles", particles_span, "lo:hi");
    search_cmd->add_option("--seed", first_seed, "search seed");

    auto* trace_cmd = app.add_subcommand("trace", "write the scenario's synthetic trace as CSV");
    add_common(trace_cmd);
    trace_cmd->add_option("--output", trace_out, "file name inside the output directory")->default_val("trace.csv");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        std::ostringstream o, e2;
        auto const code = app.exit(e, o, e2);
        out << o.str();
        err << e2.str();
        return code;
    }

    try
    {
        auto const scn = load(common);
        auto const sched = schedule(common, scn);
        auto const dir = output_dir(common);
        std::filesystem::create_directories(dir);

        if (run_cmd->parsed())
        {
            auto const policies = parse_policies(policy_list);
            if (policies.size() != 1) throw std::invalid_argument("run takes exactly one policy");
            auto rows = compare(scn, sched, policies, 1, first_seed);
            emit_comparison(dir, scn, rows);
            write_summary(out, scn, rows);
        }
        else if (cmp_cmd->parsed())
        {
            auto rows = compare(scn, sched, parse_policies(policy_list), n_seeds, first_seed, jobs);
            emit_comparison(dir, scn, rows);
            write_summary(out, scn, rows);
        }
        else if (sweep_cmd->parsed())
        {
            auto const ths = parse_thresholds(thresholds);
            std::vector<std::pair<std::string, std::vector<sweep_point>>> curves;
            for (auto p : parse_policies(policy_list))
            {
                curves.emplace_back(to_string(p), threshold_sweep(scn, sched, p, ths, first_seed));
            }
            auto os = open_out(dir / "threshold_sweep.csv");
            write_sweep_csv(os, curves);
            out << "wrote " << ths.size() << " sweep points per policy to " << (dir / "threshold_sweep.csv").string()
                << '\n';
        }
        else if (search_cmd->parsed())
        {
            search_space space;
            std::tie(space.gamma_lo, space.gamma_hi) = parse_span(gamma_span);
            std::tie(space.particles_lo, space.particles_hi) = parse_span(particles_span);
            auto const recs = hyperparam_search(scn, sched, space, trials, first_seed);
            auto os = open_out(dir / "search_trials.csv");
            write_search_csv(os, recs);
            out << "wrote " << recs.size() << " trials to " << (dir / "search_trials.csv").string() << '\n';
        }
        else if (trace_cmd->parsed())
        {
            auto os = open_out(dir / trace_out);
            emit_trace(os, sched);
            out << "wrote " << sched.snapshots.size() << " snapshots to " << (dir / trace_out).string() << '\n';
        }
    }
    catch (const std::exception& e)
    {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}

} // namespace fogplace::cli

#endif // FOGPLACE_CLI_HPP
