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
 * \file fogplace/cost.hpp
 *
 * \brief Placement cost, capacity constraints and best-fit repair.
 *
 * Loss terms, per (service s, fog node f) unless noted, all over one
 * reconfiguration period tau:
 * - proc_fog:      c_proc * psi_fog * tau on deployed pairs
 * - stor_fog:      c_stor_fog * R_stor[GB] * tau per fog instance
 * - violation_fog: c_viol(s) * max(0, 100 * P(D > th) - 100 * (1 - q_s)) * tau
 * - comm_fc:       c_comm_fc * Gb of request+response forwarded to the cloud
 * - dep_fog:       c_comm_fsc * container Gb, on 0 -> 1 transitions only
 * - wrong_fog:     c_wrong * rejected requests/s * tau
 * - delay_fog:     c_delay * d_service * tau + c_deploy * d_deploy * tau on 0 -> 1
 * - comm_ff:       inter-fog forwarding; always 0, no fog-to-fog routing exists
 * - utilization:   fog utilization reward of the node (non-positive)
 * - proc_cloud:    c_proc * psi_cloud * tau per (s, k) cloud instance
 * - stor_cloud:    c_stor_cloud * R_stor[GB] * tau per cloud instance
 *
 * Delay and violation terms only apply to pairs that receive requests.
 */

#ifndef FOGPLACE_COST_HPP
#define FOGPLACE_COST_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fogplace/delay.hpp>
#include <fogplace/matrix.hpp>
#include <fogplace/model.hpp>
#include <fogplace/traffic.hpp>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogplace {

struct cost_rates
{
    double c_proc = 2e-3; ///< per MI
    double c_stor_fog = 4e-3; ///< per GB.s
    double c_stor_cloud = 4; ///< per GB.s
    double c_comm_fc = 0.2; ///< per Gb, fog <-> cloud
    double c_comm_fsc = 0.5; ///< per Gb, image store -> fog
    double c_viol = 150; ///< per 1% violation per second, when no per-service price is set
    std::vector<double> c_viol_per_service; ///< optional per-service price, overrides c_viol
    double c_wrong = 2; ///< per rejected request/s per second
    double c_delay = 4e-3; ///< per ms of service delay, per second
    double c_deploy = 4e-3; ///< per ms of deploy delay, per second
    double impact_coefficient = 0.5; ///< memory weight of the utilization reward
    double tau_s = 120; ///< reconfiguration period
    double infeasibility_penalty = 1e6; ///< added per violated constraint

    double violation_price(std::size_t s) const noexcept
    {
        return s < c_viol_per_service.size() ? c_viol_per_service[s] : c_viol;
    }
};

inline void validate(const cost_rates& r)
{
    auto nonneg = [](double v, const char* name) {
        if (!(v >= 0)) throw std::invalid_argument(std::string("cost rate ") + name + " must be >= 0");
    };
    nonneg(r.c_proc, "c_proc");
    nonneg(r.c_stor_fog, "c_stor_fog");
    nonneg(r.c_stor_cloud, "c_stor_cloud");
    nonneg(r.c_comm_fc, "c_comm_fc");
    nonneg(r.c_comm_fsc, "c_comm_fsc");
    nonneg(r.c_viol, "c_viol");
    for (auto v : r.c_viol_per_service) nonneg(v, "c_viol_per_service");
    nonneg(r.c_wrong, "c_wrong");
    nonneg(r.c_delay, "c_delay");
    nonneg(r.c_deploy, "c_deploy");
    nonneg(r.tau_s, "tau_s");
    nonneg(r.infeasibility_penalty, "infeasibility_penalty");
    if (!(r.impact_coefficient >= 0 && r.impact_coefficient <= 1))
    {
        throw std::invalid_argument("impact_coefficient must be in [0,1]");
    }
}

/// Raw loss sums (before normalization) and the normalized total.
struct cost_breakdown
{
    double proc_fog = 0;
    double stor_fog = 0;
    double violation_fog = 0;
    double comm_fc = 0;
    double dep_fog = 0;
    double wrong_fog = 0;
    double delay_fog = 0;
    double comm_ff = 0;
    double utilization_fog = 0;
    double proc_cloud = 0;
    double stor_cloud = 0;
    std::size_t n_violations = 0; ///< violated constraints
    double penalty = 0; ///< infeasibility_penalty * n_violations
    double total = 0;

    friend bool operator==(const cost_breakdown&, const cost_breakdown&) = default;
};

/// Normalized combination of the parts; |F|, |S|, |C| of zero drop the
/// corresponding group.
inline double recompose(const cost_breakdown& b, std::size_t n_fog, std::size_t n_services, std::size_t n_cloud)
{
    double total = b.penalty;
    if (n_fog > 0 && n_services > 0)
    {
        auto const fs = static_cast<double>(n_fog) * static_cast<double>(n_services);
        total += (b.proc_fog + b.stor_fog + b.violation_fog + b.comm_fc + b.dep_fog + b.wrong_fog + b.delay_fog) / fs;
        total += b.comm_ff / (fs * static_cast<double>(n_fog));
        total += b.utilization_fog / fs;
    }
    if (n_cloud > 0 && n_services > 0)
    {
        total += (b.proc_cloud + b.stor_cloud) / (static_cast<double>(n_cloud) * static_cast<double>(n_services));
    }
    return total;
}

// ---------------------------------------------------------------------------
// Constraints
// ---------------------------------------------------------------------------

enum class constraint_kind
{
    fog_processing, ///< psi_fog >= Gamma_fog on a deployed pair
    cloud_processing, ///< psi_cloud >= Gamma_cloud on a cloud instance
    fog_storage,
    fog_memory,
    cloud_storage,
    cloud_memory,
    cloud_release ///< forwarded traffic reaches a cloud server without the service
};

inline const char* to_string(constraint_kind k)
{
    switch (k)
    {
        case constraint_kind::fog_processing: return "fog_processing";
        case constraint_kind::cloud_processing: return "cloud_processing";
        case constraint_kind::fog_storage: return "fog_storage";
        case constraint_kind::fog_memory: return "fog_memory";
        case constraint_kind::cloud_storage: return "cloud_storage";
        case constraint_kind::cloud_memory: return "cloud_memory";
        case constraint_kind::cloud_release: return "cloud_release";
    }
    return "?";
}

struct constraint_violation
{
    constraint_kind kind;
    std::size_t service; ///< npos for node-wide capacity breaches
    std::size_t node; ///< fog or cloud index, by kind

    static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

    friend bool operator==(const constraint_violation&, const constraint_violation&) = default;
};

inline std::vector<constraint_violation> check_constraints(const placement_state& p, const load_profile& load,
                                                           const topology& topo)
{
    std::vector<constraint_violation> out;
    auto const n_s = topo.n_services();
    auto const npos = constraint_violation::npos;

    for (std::size_t f = 0; f < topo.n_fog(); ++f)
    {
        double stor = 0, mem = 0;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            if (!p.on_fog(s, f)) continue;
            stor += topo.services[s].stor_demand;
            mem += topo.services[s].mem_demand;
            if (!(load.psi_fog(s, f) < load.gamma_fog(s, f)))
            {
                out.push_back({constraint_kind::fog_processing, s, f});
            }
        }
        if (!(stor < topo.fog_nodes[f].stor_cap)) out.push_back({constraint_kind::fog_storage, npos, f});
        if (!(mem < topo.fog_nodes[f].mem_cap)) out.push_back({constraint_kind::fog_memory, npos, f});
    }

    for (std::size_t k = 0; k < topo.n_cloud(); ++k)
    {
        double stor = 0, mem = 0;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            if (p.on_cloud(s, k))
            {
                stor += topo.services[s].stor_demand;
                mem += topo.services[s].mem_demand;
                if (!(load.psi_cloud(s, k) < load.gamma_cloud(s, k)))
                {
                    out.push_back({constraint_kind::cloud_processing, s, k});
                }
            }
            else if (load.psi_cloud(s, k) > 0)
            {
                out.push_back({constraint_kind::cloud_release, s, k});
            }
        }
        if (!(stor < topo.cloud_servers[k].stor_cap)) out.push_back({constraint_kind::cloud_storage, npos, k});
        if (!(mem < topo.cloud_servers[k].mem_cap)) out.push_back({constraint_kind::cloud_memory, npos, k});
    }
    return out;
}

/// Sets Q(s,k) = 1 exactly where some fog node forwards requests of s to k.
inline void route_to_cloud(placement_state& p, const traffic_snapshot& snap, const topology& topo)
{
    p.cloud.fill(0);
    for (std::size_t s = 0; s < topo.n_services(); ++s)
    {
        for (std::size_t f = 0; f < topo.n_fog(); ++f)
        {
            if (!p.on_fog(s, f) && snap.rates(s, f) > 0)
            {
                p.cloud(s, topo.offload_target(s, f)) = 1;
            }
        }
    }
}

/// Running per-node totals of the services deployed on each fog node.
///
/// All services on a node share the same service rate M / sum(R_proc), so
/// the node keeps its processing constraint iff every deployed service
/// has a request rate below that ratio.
class fog_usage
{
public:
    fog_usage(const placement_state& p, const traffic_snapshot& snap, const topology& topo)
    : topo_(&topo), snap_(&snap), nodes_(topo.n_fog())
    {
        for (std::size_t f = 0; f < topo.n_fog(); ++f)
        {
            for (std::size_t s = 0; s < topo.n_services(); ++s)
            {
                if (p.on_fog(s, f)) add(s, f);
            }
        }
    }

    void add(std::size_t s, std::size_t f)
    {
        auto& n = nodes_[f];
        auto const& svc = topo_->services[s];
        n.proc += svc.proc_demand;
        n.mem += svc.mem_demand;
        n.stor += svc.stor_demand;
        n.max_rate = std::max(n.max_rate, snap_->rates(s, f));
        ++n.count;
    }

    void remove(std::size_t s, std::size_t f, const placement_state& after)
    {
        auto& n = nodes_[f];
        auto const& svc = topo_->services[s];
        n.proc -= svc.proc_demand;
        n.mem -= svc.mem_demand;
        n.stor -= svc.stor_demand;
        --n.count;
        if (n.count == 0)
        {
            n = node{};
            return;
        }
        if (snap_->rates(s, f) >= n.max_rate)
        {
            n.max_rate = 0;
            for (std::size_t s2 = 0; s2 < topo_->n_services(); ++s2)
            {
                if (after.on_fog(s2, f)) n.max_rate = std::max(n.max_rate, snap_->rates(s2, f));
            }
        }
    }

    /// Whether deploying s on f keeps every capacity constraint of f.
    bool fits(std::size_t s, std::size_t f) const
    {
        auto const& n = nodes_[f];
        auto const& svc = topo_->services[s];
        auto const& cap = topo_->fog_nodes[f];
        if (!(n.mem + svc.mem_demand < cap.mem_cap)) return false;
        if (!(n.stor + svc.stor_demand < cap.stor_cap)) return false;
        auto const rate_limit = cap.proc_cap / (n.proc + svc.proc_demand);
        return std::max(n.max_rate, snap_->rates(s, f)) < rate_limit;
    }

    /// Smallest remaining memory/storage fraction after deploying s on f.
    double slack_after(std::size_t s, std::size_t f) const
    {
        auto const& n = nodes_[f];
        auto const& svc = topo_->services[s];
        auto const& cap = topo_->fog_nodes[f];
        return std::min((cap.mem_cap - n.mem - svc.mem_demand) / cap.mem_cap,
                        (cap.stor_cap - n.stor - svc.stor_demand) / cap.stor_cap);
    }

    bool feasible(std::size_t f) const
    {
        auto const& n = nodes_[f];
        if (n.count == 0) return true;
        auto const& cap = topo_->fog_nodes[f];
        return n.mem < cap.mem_cap && n.stor < cap.stor_cap && n.max_rate < cap.proc_cap / n.proc;
    }

private:
    struct node
    {
        double proc = 0;
        double mem = 0;
        double stor = 0;
        double max_rate = 0;
        std::size_t count = 0;
    };

    const topology* topo_;
    const traffic_snapshot* snap_;
    std::vector<node> nodes_;
};

class infeasible_placement_error : public std::runtime_error
{
public:
    infeasible_placement_error(std::size_t service, const std::string& what)
    : std::runtime_error(what), service_(service)
    {
    }

    std::size_t service() const noexcept { return service_; }

private:
    std::size_t service_;
};

namespace detail {

inline bool fits_alone_fog(const service_spec& s, const fog_node_spec& f)
{
    return s.mem_demand < f.mem_cap && s.stor_demand < f.stor_cap;
}

inline bool fits_alone_cloud(const service_spec& s, const cloud_server_spec& k)
{
    return s.mem_demand < k.mem_cap && s.stor_demand < k.stor_cap;
}

/// Evicts services from every over-capacity fog node; returns the evicted
/// (service, node) pairs in eviction order.
inline std::vector<std::pair<std::size_t, std::size_t>> evict_overloaded(placement_state& p, fog_usage& usage,
                                                                         const traffic_snapshot& snap,
                                                                         const topology& topo)
{
    std::vector<std::pair<std::size_t, std::size_t>> evicted;
    for (std::size_t f = 0; f < topo.n_fog(); ++f)
    {
        auto const& cap = topo.fog_nodes[f];
        while (!usage.feasible(f))
        {
            double stor = 0, mem = 0, proc = 0;
            for (std::size_t s = 0; s < topo.n_services(); ++s)
            {
                if (!p.on_fog(s, f)) continue;
                stor += topo.services[s].stor_demand;
                mem += topo.services[s].mem_demand;
                proc += topo.services[s].proc_demand;
            }
            auto const rate_limit = cap.proc_cap / proc;

            // Processing breach: drop the busiest over-limit service.
            // Memory or storage breach: drop the largest consumer.
            std::size_t victim = topo.n_services();
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t s = 0; s < topo.n_services(); ++s)
            {
                if (!p.on_fog(s, f)) continue;
                double score;
                if (!(stor < cap.stor_cap))
                {
                    score = topo.services[s].stor_demand;
                }
                else if (!(mem < cap.mem_cap))
                {
                    score = topo.services[s].mem_demand;
                }
                else
                {
                    score = snap.rates(s, f) >= rate_limit ? snap.rates(s, f) : snap.rates(s, f) - 1e300;
                }
                if (score > best)
                {
                    best = score;
                    victim = s;
                }
            }
            p.fog(victim, f) = 0;
            usage.remove(victim, f, p);
            evicted.emplace_back(victim, f);
        }
    }
    return evicted;
}

} // namespace detail

/// Restores capacity feasibility.
///
/// 1. Services are evicted from fog nodes that breach processing, memory or
///    storage capacity.
/// 2. Every evicted service is re-deployed on the fog node, among those that
///    receive its requests and can still host it, with the least remaining
///    slack (best fit); otherwise its requests go to the cloud.
/// 3. Cloud instances follow the forwarded traffic. Cloud servers over
///    capacity shed load by deploying their services on offloading fog
///    nodes that can host them.
///
/// Throws infeasible_placement_error when a service with requests fits on
/// no fog node and no cloud server. Residual cloud overload that no fog
/// deployment can relieve is left in place; total_cost() prices it.
inline placement_state best_fit_repair(placement_state p, const topology& topo, const traffic_snapshot& snap)
{
    check_dimensions(p, topo);
    auto const n_s = topo.n_services();
    auto const n_f = topo.n_fog();

    for (std::size_t s = 0; s < n_s; ++s)
    {
        bool needed = false;
        for (std::size_t f = 0; f < n_f && !needed; ++f)
        {
            needed = snap.rates(s, f) > 0 || p.on_fog(s, f);
        }
        if (!needed) continue;
        bool fits = false;
        for (auto const& node : topo.fog_nodes) fits = fits || detail::fits_alone_fog(topo.services[s], node);
        for (auto const& k : topo.cloud_servers) fits = fits || detail::fits_alone_cloud(topo.services[s], k);
        if (!fits)
        {
            throw infeasible_placement_error(s, "service " + std::to_string(s) + " fits on no fog node or cloud server");
        }
    }

    fog_usage usage(p, snap, topo);
    auto const evicted = detail::evict_overloaded(p, usage, snap, topo);

    for (auto const& [s, from] : evicted)
    {
        std::size_t best = n_f;
        double best_slack = std::numeric_limits<double>::infinity();
        for (std::size_t f = 0; f < n_f; ++f)
        {
            if (f == from || p.on_fog(s, f) || !(snap.rates(s, f) > 0) || !usage.fits(s, f)) continue;
            auto const slack = usage.slack_after(s, f);
            if (slack < best_slack)
            {
                best_slack = slack;
                best = f;
            }
        }
        if (best < n_f)
        {
            p.fog(s, best) = 1;
            usage.add(s, best);
        }
    }

    route_to_cloud(p, snap, topo);

    // Cloud relief: pull forwarded traffic of over-capacity servers onto fog.
    for (std::size_t guard = 0; guard <= n_s * n_f; ++guard)
    {
        auto const load = compute_load(p, snap, topo);
        std::vector<std::uint8_t> proc_bad(n_s * topo.n_cloud(), 0);
        std::vector<std::uint8_t> server_bad(topo.n_cloud(), 0);
        bool any = false;
        for (auto const& v : check_constraints(p, load, topo))
        {
            if (v.kind == constraint_kind::cloud_processing)
            {
                proc_bad[v.service * topo.n_cloud() + v.node] = 1;
                any = true;
            }
            else if (v.kind == constraint_kind::cloud_storage || v.kind == constraint_kind::cloud_memory)
            {
                server_bad[v.node] = 1;
                any = true;
            }
        }
        if (!any) break;

        // Prefer relieving an overloaded queue by its busiest forwarder;
        // for memory/storage, finish releasing the service closest to leaving.
        std::size_t pick_s = n_s, pick_f = n_f;
        double pick_score = -std::numeric_limits<double>::infinity();
        for (std::size_t s = 0; s < n_s; ++s)
        {
            std::vector<std::size_t> forwarders(topo.n_cloud(), 0);
            for (std::size_t f = 0; f < n_f; ++f)
            {
                if (!p.on_fog(s, f) && snap.rates(s, f) > 0) ++forwarders[topo.offload_target(s, f)];
            }
            for (std::size_t f = 0; f < n_f; ++f)
            {
                if (p.on_fog(s, f) || !(snap.rates(s, f) > 0)) continue;
                auto const k = topo.offload_target(s, f);
                double score;
                if (proc_bad[s * topo.n_cloud() + k])
                {
                    score = 1e12 + snap.rates(s, f);
                }
                else if (server_bad[k])
                {
                    score = -static_cast<double>(forwarders[k]) * 1e6 + topo.services[s].stor_demand / 1e9;
                }
                else
                {
                    continue;
                }
                if (!usage.fits(s, f)) continue;
                if (score > pick_score)
                {
                    pick_score = score;
                    pick_s = s;
                    pick_f = f;
                }
            }
        }
        if (pick_s == n_s) break;
        p.fog(pick_s, pick_f) = 1;
        usage.add(pick_s, pick_f);
        route_to_cloud(p, snap, topo);
    }
    return p;
}

// ---------------------------------------------------------------------------
// Loss terms
// ---------------------------------------------------------------------------

/// Fog utilization reward of node f: -(a * mem fraction + (1 - a) * storage
/// fraction) over the services deployed on f; always <= 0.
inline double utilization_reward(const placement_state& p, std::size_t f, const topology& topo, double impact)
{
    double mem = 0, stor = 0;
    for (std::size_t s = 0; s < topo.n_services(); ++s)
    {
        if (p.on_fog(s, f))
        {
            mem += topo.services[s].mem_demand;
            stor += topo.services[s].stor_demand;
        }
    }
    auto const& node = topo.fog_nodes[f];
    return -impact * (mem / node.mem_cap) - (1.0 - impact) * (stor / node.stor_cap);
}

/// Service-delay loss plus deploy-delay loss of one pair.
inline double delay_loss(std::size_t s, std::size_t f, const placement_state& p, const placement_state& prev,
                         const delay_report& report, const traffic_snapshot& snap, const cost_rates& rates)
{
    double loss = 0;
    if (snap.rates(s, f) > 0)
    {
        loss += rates.c_delay * report.service_delay_ms(s, f) * rates.tau_s;
    }
    if (p.on_fog(s, f) && !prev.on_fog(s, f))
    {
        loss += rates.c_deploy * report.deploy_delay_ms(s, f) * rates.tau_s;
    }
    return loss;
}

/// Penalized share of requests above the allowed 1 - q_s, in percent.
inline double excess_violation_pct(double violation_prob, double qos_level)
{
    return std::max(0.0, 100.0 * violation_prob - 100.0 * (1.0 - qos_level));
}

struct evaluation
{
    load_profile load;
    delay_report delays;
    std::vector<constraint_violation> violations;
    cost_breakdown cost;
};

inline evaluation evaluate(const placement_state& p, const placement_state& prev, const traffic_snapshot& snap,
                           const topology& topo, const cost_rates& rates, const delay_params& dparams)
{
    auto const n_s = topo.n_services();
    auto const n_f = topo.n_fog();
    auto const n_c = topo.n_cloud();
    auto const tau = rates.tau_s;
    constexpr double bits_per_gb = 1e9;

    evaluation ev;
    ev.load = compute_load(p, snap, topo);
    ev.delays = compute_delays(p, snap, ev.load, topo, dparams);
    ev.violations = check_constraints(p, ev.load, topo);
    auto& b = ev.cost;

    for (std::size_t s = 0; s < n_s; ++s)
    {
        auto const& svc = topo.services[s];
        auto const stor_gb = svc.stor_demand / bytes_per_gb;
        auto const msg_gb = (svc.request_size + svc.response_size) * 8.0 / bits_per_gb;
        for (std::size_t f = 0; f < n_f; ++f)
        {
            auto const deployed = p.on_fog(s, f);
            auto const t = snap.rates(s, f);
            if (deployed)
            {
                b.proc_fog += rates.c_proc * ev.load.psi_fog(s, f) * tau;
                b.stor_fog += rates.c_stor_fog * stor_gb * tau;
                if (!prev.on_fog(s, f))
                {
                    b.dep_fog += rates.c_comm_fsc * svc.stor_demand * 8.0 / bits_per_gb;
                }
            }
            else if (t > 0)
            {
                b.comm_fc += rates.c_comm_fc * msg_gb * t * tau;
            }
            if (t > 0)
            {
                b.violation_fog += rates.violation_price(s)
                                   * excess_violation_pct(ev.delays.violation_prob(s, f), svc.qos_level) * tau;
                b.wrong_fog += rates.c_wrong * ev.delays.rejected_rate(s, f) * tau;
            }
            b.delay_fog += delay_loss(s, f, p, prev, ev.delays, snap, rates);
        }
        for (std::size_t k = 0; k < n_c; ++k)
        {
            if (p.on_cloud(s, k))
            {
                b.proc_cloud += rates.c_proc * ev.load.psi_cloud(s, k) * tau;
                b.stor_cloud += rates.c_stor_cloud * stor_gb * tau;
            }
        }
    }
    // The reward of node f appears once per service in the double sum.
    for (std::size_t f = 0; f < n_f; ++f)
    {
        b.utilization_fog += static_cast<double>(n_s) * utilization_reward(p, f, topo, rates.impact_coefficient);
    }
    b.n_violations = ev.violations.size();
    b.penalty = rates.infeasibility_penalty * static_cast<double>(b.n_violations);
    b.total = recompose(b, n_f, n_s, n_c);
    return ev;
}

inline cost_breakdown total_cost(const placement_state& p, const placement_state& prev, const traffic_snapshot& snap,
                                 const topology& topo, const cost_rates& rates, const delay_params& dparams)
{
    return evaluate(p, prev, snap, topo, rates, dparams).cost;
}

} // namespace fogplace

#endif // FOGPLACE_COST_HPP
