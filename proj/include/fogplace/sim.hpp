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
 * \file fogplace/sim.hpp
 *
 * \brief Reconfiguration loop and experiment drivers.
 *
 * The fog placement P chosen at a reconfiguration serves every snapshot
 * until the next one; the cloud placement is re-derived from P and the
 * current traffic at each snapshot.
 */

#ifndef FOGPLACE_SIM_HPP
#define FOGPLACE_SIM_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fogplace/baselines.hpp>
#include <fogplace/cost.hpp>
#include <fogplace/delay.hpp>
#include <fogplace/model.hpp>
#include <fogplace/optimizer.hpp>
#include <fogplace/random.hpp>
#include <fogplace/scenario.hpp>
#include <fogplace/text.hpp>
#include <fogplace/traffic.hpp>
#include <future>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogplace {

enum class policy_kind
{
    all_cloud,
    min_viol,
    min_cost,
    bpso,
    hbpcro
};

inline const char* to_string(policy_kind p)
{
    switch (p)
    {
        case policy_kind::all_cloud: return "all_cloud";
        case policy_kind::min_viol: return "min_viol";
        case policy_kind::min_cost: return "min_cost";
        case policy_kind::bpso: return "bpso";
        case policy_kind::hbpcro: return "hbpcro";
    }
    return "?";
}

inline policy_kind parse_policy(std::string_view name)
{
    for (auto p : {policy_kind::all_cloud, policy_kind::min_viol, policy_kind::min_cost, policy_kind::bpso,
                   policy_kind::hbpcro})
    {
        if (name == to_string(p)) return p;
    }
    throw std::invalid_argument("unknown policy '" + std::string(name) + "'");
}

/// One placement decision.
inline placement_state provision(policy_kind policy, const scenario& scn, const traffic_snapshot& snap,
                                 const placement_state& prev, std::uint64_t seed)
{
    auto const& topo = scn.topo;
    switch (policy)
    {
        case policy_kind::all_cloud: return all_cloud(topo, snap);
        case policy_kind::min_viol: return min_viol(topo, snap, prev, scn.config.min_viol);
        case policy_kind::min_cost: return min_cost(topo, snap, prev, scn.rates, scn.delays);
        case policy_kind::bpso:
        case policy_kind::hbpcro:
        {
            auto cfg = scn.config.swarm;
            cfg.seed = seed;
            auto const mode = policy == policy_kind::bpso ? search_mode::pso_only : search_mode::hybrid;
            return solve(cfg, topo, snap, prev, scn.rates, scn.delays, mode).placement;
        }
    }
    throw std::logic_error("unreachable");
}

struct interval_metrics
{
    std::size_t interval = 0;
    bool reconfigured = false;
    double avg_service_delay_ms = 0; ///< request-weighted
    double mean_service_delay_ms = 0; ///< unweighted over requested pairs
    double delay_violation_pct = 0; ///< request-weighted share above th_s
    double total_cost = 0;
    cost_breakdown cost;
    std::size_t n_fog_deployments = 0;
    std::size_t n_cloud_deployments = 0;
    double request_rate = 0; ///< total requests/s

    friend bool operator==(const interval_metrics&, const interval_metrics&) = default;
};

struct run_aggregates
{
    double avg_service_delay_ms = 0;
    double mean_service_delay_ms = 0;
    double delay_violation_pct = 0;
    double total_cost = 0;
    double n_fog_deployments = 0;
    double n_cloud_deployments = 0;

    friend bool operator==(const run_aggregates&, const run_aggregates&) = default;
};

struct run_result
{
    std::vector<interval_metrics> per_interval;
    run_aggregates aggregates;
    std::string policy;
    std::uint64_t seed = 0;
    std::size_t reconfigurations = 0;
};

inline run_aggregates aggregate(const std::vector<interval_metrics>& rows)
{
    run_aggregates a;
    if (rows.empty()) return a;
    for (auto const& m : rows)
    {
        a.avg_service_delay_ms += m.avg_service_delay_ms;
        a.mean_service_delay_ms += m.mean_service_delay_ms;
        a.delay_violation_pct += m.delay_violation_pct;
        a.total_cost += m.total_cost;
        a.n_fog_deployments += static_cast<double>(m.n_fog_deployments);
        a.n_cloud_deployments += static_cast<double>(m.n_cloud_deployments);
    }
    auto const n = static_cast<double>(rows.size());
    a.avg_service_delay_ms /= n;
    a.mean_service_delay_ms /= n;
    a.delay_violation_pct /= n;
    a.total_cost /= n;
    a.n_fog_deployments /= n;
    a.n_cloud_deployments /= n;
    return a;
}

/// Metrics of placement p serving snapshot snap; prev is what was deployed
/// before (equal to p when nothing changed).
inline interval_metrics measure(const placement_state& p, const placement_state& prev, const traffic_snapshot& snap,
                                const scenario& scn, bool stall_on_deploy = false)
{
    auto const& topo = scn.topo;
    auto const ev = evaluate(p, prev, snap, topo, scn.rates, scn.delays);
    interval_metrics m;
    m.interval = snap.interval;
    m.cost = ev.cost;
    m.total_cost = ev.cost.total;
    m.n_fog_deployments = p.fog_count();
    m.n_cloud_deployments = p.cloud_count();

    double weight = 0, weighted_delay = 0, weighted_viol = 0, plain_delay = 0;
    std::size_t pairs = 0;
    for (std::size_t s = 0; s < topo.n_services(); ++s)
    {
        for (std::size_t f = 0; f < topo.n_fog(); ++f)
        {
            auto const t = snap.rates(s, f);
            if (!(t > 0)) continue;
            auto d = ev.delays.service_delay_ms(s, f);
            if (stall_on_deploy && p.on_fog(s, f) && !prev.on_fog(s, f))
            {
                d += ev.delays.deploy_delay_ms(s, f);
            }
            weight += t;
            weighted_delay += t * d;
            weighted_viol += t * ev.delays.violation_prob(s, f);
            plain_delay += d;
            ++pairs;
        }
    }
    m.request_rate = weight;
    if (weight > 0)
    {
        m.avg_service_delay_ms = weighted_delay / weight;
        m.delay_violation_pct = std::clamp(100.0 * weighted_viol / weight, 0.0, 100.0);
        m.mean_service_delay_ms = plain_delay / static_cast<double>(pairs);
    }
    return m;
}

class policy_error : public std::runtime_error
{
public:
    policy_error(std::size_t interval, const std::string& what)
    : std::runtime_error("interval " + std::to_string(interval) + ": " + what), interval_(interval)
    {
    }

    std::size_t interval() const noexcept { return interval_; }

private:
    std::size_t interval_;
};

/// Replays the schedule, reconfiguring at the first snapshot and then
/// whenever tau seconds have passed since the last reconfiguration.
inline run_result run(const scenario& scn, const trace_schedule& sched, policy_kind policy, std::uint64_t seed = 1)
{
    validate(sched, scn.topo);
    auto const& topo = scn.topo;
    auto const tau = scn.config.tau_s;
    auto const period = sched.traffic_period_s;

    run_result out;
    out.policy = to_string(policy);
    out.seed = seed;

    auto current = new_placement(topo);
    double last_reconfig_s = 0;
    for (std::size_t i = 0; i < sched.snapshots.size(); ++i)
    {
        auto const& snap = sched.snapshots[i];
        auto const now = static_cast<double>(snap.interval - sched.snapshots.front().interval) * period;
        auto const prev = current;
        bool const reconfigure = i == 0 || now - last_reconfig_s >= tau - 1e-9 * tau;
        if (reconfigure)
        {
            try
            {
                current = provision(policy, scn, snap, prev, derive_seed(seed, out.reconfigurations));
            }
            catch (const std::exception& e)
            {
                throw policy_error(snap.interval, e.what());
            }
            last_reconfig_s = now;
            ++out.reconfigurations;
        }
        current.timestamp = snap.interval;
        route_to_cloud(current, snap, topo);
        auto prev_for_cost = reconfigure ? prev : current;
        auto m = measure(current, prev_for_cost, snap, scn, reconfigure && scn.config.stall_on_deploy);
        m.reconfigured = reconfigure;
        out.per_interval.push_back(m);
    }
    out.aggregates = aggregate(out.per_interval);
    return out;
}

struct metric_stats
{
    double mean = 0;
    double stddev = 0; ///< sample standard deviation; 0 for a single run
};

inline metric_stats summarize(const std::vector<double>& xs)
{
    metric_stats st;
    if (xs.empty()) return st;
    for (auto x : xs) st.mean += x;
    st.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1)
    {
        double ss = 0;
        for (auto x : xs) ss += (x - st.mean) * (x - st.mean);
        st.stddev = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    }
    return st;
}

struct comparison_row
{
    std::string policy;
    metric_stats avg_service_delay_ms;
    metric_stats mean_service_delay_ms;
    metric_stats delay_violation_pct;
    metric_stats total_cost;
    metric_stats n_fog_deployments;
    metric_stats n_cloud_deployments;
    std::vector<run_result> runs;
};

/// Runs every policy with seeds first_seed .. first_seed + n_seeds - 1.
/// Runs are independent; with jobs > 1 they execute concurrently and the
/// table is identical to a sequential run.
inline std::vector<comparison_row> compare(const scenario& scn, const trace_schedule& sched,
                                           const std::vector<policy_kind>& policies, std::size_t n_seeds,
                                           std::uint64_t first_seed = 1, std::size_t jobs = 1)
{
    if (policies.empty()) throw std::invalid_argument("compare: no policies");
    std::vector<comparison_row> rows;
    for (auto p : policies)
    {
        comparison_row row;
        row.policy = to_string(p);
        row.runs.resize(n_seeds);
        if (jobs <= 1)
        {
            for (std::size_t i = 0; i < n_seeds; ++i) row.runs[i] = run(scn, sched, p, first_seed + i);
        }
        else
        {
            for (std::size_t start = 0; start < n_seeds; start += jobs)
            {
                std::vector<std::future<run_result>> pending;
                for (std::size_t i = start; i < std::min(n_seeds, start + jobs); ++i)
                {
                    pending.push_back(std::async(std::launch::async, [&scn, &sched, p, i, first_seed] {
                        return run(scn, sched, p, first_seed + i);
                    }));
                }
                for (std::size_t i = 0; i < pending.size(); ++i) row.runs[start + i] = pending[i].get();
            }
        }
        auto collect = [&](auto field) {
            std::vector<double> xs;
            for (auto const& r : row.runs) xs.push_back(r.aggregates.*field);
            return summarize(xs);
        };
        row.avg_service_delay_ms = collect(&run_aggregates::avg_service_delay_ms);
        row.mean_service_delay_ms = collect(&run_aggregates::mean_service_delay_ms);
        row.delay_violation_pct = collect(&run_aggregates::delay_violation_pct);
        row.total_cost = collect(&run_aggregates::total_cost);
        row.n_fog_deployments = collect(&run_aggregates::n_fog_deployments);
        row.n_cloud_deployments = collect(&run_aggregates::n_cloud_deployments);
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Copy of the scenario with every service's threshold set to th; the
/// delay ceiling stays where it was.
inline scenario with_threshold(const scenario& scn, double th)
{
    auto out = scn;
    for (auto& s : out.topo.services) s.delay_threshold = th;
    return out;
}

struct sweep_point
{
    double threshold_ms = 0;
    run_result result;
};

inline std::vector<sweep_point> threshold_sweep(const scenario& scn, const trace_schedule& sched, policy_kind policy,
                                                const std::vector<double>& thresholds, std::uint64_t seed = 1)
{
    if (thresholds.empty()) throw std::invalid_argument("threshold_sweep: no thresholds");
    std::vector<sweep_point> out;
    for (auto th : thresholds)
    {
        out.push_back({th, run(with_threshold(scn, th), sched, policy, seed)});
    }
    return out;
}

/// lo, lo + step, ... below hi. Used for "lo:hi:step" sweep specs.
inline std::vector<double> threshold_range(double lo, double hi, double step)
{
    if (!(step > 0) || !(lo < hi)) throw std::invalid_argument("threshold range needs lo < hi and step > 0");
    std::vector<double> out;
    for (std::size_t i = 0;; ++i)
    {
        auto const v = lo + static_cast<double>(i) * step;
        if (v >= hi - 1e-12 * std::abs(hi)) break;
        out.push_back(v);
    }
    return out;
}

struct search_space
{
    std::size_t gamma_lo = 2, gamma_hi = 10;
    std::size_t particles_lo = 5, particles_hi = 50;
};

struct trial_record
{
    std::size_t gamma = 0;
    std::size_t n_particles = 0;
    double avg_service_delay_ms = 0;
    double delay_violation_pct = 0;
    double total_cost = 0;
};

/// Random search over (gamma, swarm size); each trial is a full hbpcro run.
inline std::vector<trial_record> hyperparam_search(const scenario& scn, const trace_schedule& sched,
                                                   const search_space& space, std::size_t n_trials,
                                                   std::uint64_t seed = 1)
{
    if (space.gamma_lo > space.gamma_hi || space.particles_lo > space.particles_hi || space.particles_lo < 2)
    {
        throw std::invalid_argument("hyperparam_search: bad ranges");
    }
    rng_stream rng(derive_seed(seed, 0x5eac));
    std::vector<trial_record> out;
    for (std::size_t i = 0; i < n_trials; ++i)
    {
        trial_record rec;
        rec.gamma = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(space.gamma_lo), static_cast<std::int64_t>(space.gamma_hi)));
        rec.n_particles = static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(space.particles_lo),
                                                                     static_cast<std::int64_t>(space.particles_hi)));
        auto trial = scn;
        trial.config.swarm.gamma = rec.gamma;
        trial.config.swarm.n_particles = rec.n_particles;
        auto const r = run(trial, sched, policy_kind::hbpcro, derive_seed(seed, i));
        rec.avg_service_delay_ms = r.aggregates.avg_service_delay_ms;
        rec.delay_violation_pct = r.aggregates.delay_violation_pct;
        rec.total_cost = r.aggregates.total_cost;
        out.push_back(rec);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Metrics CSV
// ---------------------------------------------------------------------------

inline const char* metrics_header()
{
    return "interval,reconfigured,avg_service_delay_ms,mean_service_delay_ms,delay_violation_pct,total_cost,"
           "n_fog_deployments,n_cloud_deployments,request_rate,proc_fog,stor_fog,violation_fog,comm_fc,dep_fog,"
           "wrong_fog,delay_fog,comm_ff,utilization_fog,proc_cloud,stor_cloud,n_violations,penalty";
}

inline void write_metrics_csv(std::ostream& os, const std::vector<interval_metrics>& rows)
{
    os << metrics_header() << '\n';
    for (auto const& m : rows)
    {
        auto const& c = m.cost;
        os << m.interval << ',' << (m.reconfigured ? 1 : 0) << ',' << format_double(m.avg_service_delay_ms) << ','
           << format_double(m.mean_service_delay_ms) << ',' << format_double(m.delay_violation_pct) << ','
           << format_double(m.total_cost) << ',' << m.n_fog_deployments << ',' << m.n_cloud_deployments << ','
           << format_double(m.request_rate) << ',' << format_double(c.proc_fog) << ',' << format_double(c.stor_fog)
           << ',' << format_double(c.violation_fog) << ',' << format_double(c.comm_fc) << ','
           << format_double(c.dep_fog) << ',' << format_double(c.wrong_fog) << ',' << format_double(c.delay_fog)
           << ',' << format_double(c.comm_ff) << ',' << format_double(c.utilization_fog) << ','
           << format_double(c.proc_cloud) << ',' << format_double(c.stor_cloud) << ',' << c.n_violations << ','
           << format_double(c.penalty) << '\n';
    }
}

inline std::vector<interval_metrics> read_metrics_csv(std::istream& in)
{
    std::vector<interval_metrics> rows;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& what) {
        throw std::runtime_error("metrics line " + std::to_string(line_no) + ": " + what);
    };
    while (std::getline(in, line))
    {
        ++line_no;
        auto const body = trim(line);
        if (body.empty()) continue;
        if (line_no == 1 && body == metrics_header()) continue;
        auto const f = split(body, ',');
        if (f.size() != 22) fail("expected 22 fields");
        auto num = [&](std::size_t i) {
            auto v = parse_double(f[i]);
            if (!v) fail("bad number in column " + std::to_string(i + 1));
            return *v;
        };
        auto cnt = [&](std::size_t i) {
            auto v = parse_uint(f[i]);
            if (!v) fail("bad count in column " + std::to_string(i + 1));
            return static_cast<std::size_t>(*v);
        };
        interval_metrics m;
        m.interval = cnt(0);
        m.reconfigured = cnt(1) != 0;
        m.avg_service_delay_ms = num(2);
        m.mean_service_delay_ms = num(3);
        m.delay_violation_pct = num(4);
        m.total_cost = num(5);
        m.n_fog_deployments = cnt(6);
        m.n_cloud_deployments = cnt(7);
        m.request_rate = num(8);
        auto& c = m.cost;
        c.proc_fog = num(9);
        c.stor_fog = num(10);
        c.violation_fog = num(11);
        c.comm_fc = num(12);
        c.dep_fog = num(13);
        c.wrong_fog = num(14);
        c.delay_fog = num(15);
        c.comm_ff = num(16);
        c.utilization_fog = num(17);
        c.proc_cloud = num(18);
        c.stor_cloud = num(19);
        c.n_violations = cnt(20);
        c.penalty = num(21);
        c.total = m.total_cost;
        rows.push_back(m);
    }
    return rows;
}

} // namespace fogplace

#endif // FOGPLACE_SIM_HPP
