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
 * \file fogplace/baselines.hpp
 *
 * \brief Reference provisioning policies: all-cloud, a traffic-driven
 * greedy (min_viol), a cost-driven local search (min_cost) and pure binary
 * PSO.
 */

#ifndef FOGPLACE_BASELINES_HPP
#define FOGPLACE_BASELINES_HPP

#include <algorithm>
#include <cstddef>
#include <fogplace/cost.hpp>
#include <fogplace/delay.hpp>
#include <fogplace/model.hpp>
#include <fogplace/optimizer.hpp>
#include <fogplace/traffic.hpp>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace fogplace {

class capacity_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Nothing on fog; every service with forwarded traffic is instantiated on
/// the cloud servers its fog nodes offload to. Throws capacity_error when a
/// cloud server cannot hold the instances routed to it.
inline placement_state all_cloud(const topology& topo, const traffic_snapshot& snap)
{
    auto p = new_placement(topo);
    p.timestamp = snap.interval;
    route_to_cloud(p, snap, topo);
    auto const load = compute_load(p, snap, topo);
    for (auto const& v : check_constraints(p, load, topo))
    {
        if (v.kind == constraint_kind::cloud_memory || v.kind == constraint_kind::cloud_storage)
        {
            throw capacity_error("all_cloud: cloud server " + std::to_string(v.node) + " lacks "
                                 + to_string(v.kind));
        }
    }
    return p;
}

struct min_viol_config
{
    double theta_up = 0.1; ///< requests/s needed to consider deploying
    double hysteresis = 0.7; ///< release at rate <= hysteresis * theta_up

    double theta_down() const noexcept { return hysteresis * theta_up; }
};

inline void validate(const min_viol_config& c)
{
    if (!(c.theta_up >= 0)) throw std::invalid_argument("theta_up must be >= 0");
    if (!(c.hysteresis >= 0 && c.hysteresis <= 1)) throw std::invalid_argument("hysteresis must be in [0,1]");
}

namespace detail {

inline placement_state carry_over(const placement_state& prev, const topology& topo)
{
    auto p = new_placement(topo);
    if (prev.fog.rows() == p.fog.rows() && prev.fog.cols() == p.fog.cols())
    {
        p.fog = prev.fog;
    }
    return p;
}

} // namespace detail

/// Traffic-driven greedy. Services whose rate dropped to theta_down or
/// below are released; then, node by node, the busiest services above
/// theta_up are deployed while they fit and remote service would break
/// their QoS level.
inline placement_state min_viol(const topology& topo, const traffic_snapshot& snap, const placement_state& prev,
                                const min_viol_config& cfg = {})
{
    auto p = detail::carry_over(prev, topo);
    p.timestamp = snap.interval;
    auto const n_s = topo.n_services();
    auto const n_f = topo.n_fog();

    for (std::size_t s = 0; s < n_s; ++s)
    {
        for (std::size_t f = 0; f < n_f; ++f)
        {
            if (p.on_fog(s, f) && snap.rates(s, f) <= cfg.theta_down())
            {
                p.fog(s, f) = 0;
            }
        }
    }
    p = best_fit_repair(std::move(p), topo, snap);

    std::vector<std::size_t> order(n_s);
    for (std::size_t f = 0; f < n_f; ++f)
    {
        route_to_cloud(p, snap, topo);
        auto const load = compute_load(p, snap, topo);
        fog_usage usage(p, snap, topo);

        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return snap.rates(a, f) > snap.rates(b, f); });
        for (auto s : order)
        {
            auto const t = snap.rates(s, f);
            if (!(t > 0) || t < cfg.theta_up || p.on_fog(s, f)) continue;
            auto const& svc = topo.services[s];
            auto const remote = violation_prob(serving_queue(s, f, p, load, topo), svc.delay_threshold);
            if (remote <= 1.0 - svc.qos_level) continue;
            if (!usage.fits(s, f)) continue;
            p.fog(s, f) = 1;
            usage.add(s, f);
        }
    }
    route_to_cloud(p, snap, topo);
    return best_fit_repair(std::move(p), topo, snap);
}

/// Best-improvement local search over single deploy/release moves,
/// starting from the cheaper of the repaired previous placement and
/// all-cloud.
inline placement_state min_cost(const topology& topo, const traffic_snapshot& snap, const placement_state& prev,
                                const cost_rates& rates, const delay_params& dparams = {})
{
    auto const n_s = topo.n_services();
    auto const n_f = topo.n_fog();

    auto cost_of = [&](const placement_state& p) { return total_cost(p, prev, snap, topo, rates, dparams).total; };

    auto p = new_placement(topo);
    p.timestamp = snap.interval;
    route_to_cloud(p, snap, topo);
    double best = cost_of(p);
    {
        auto carried = detail::carry_over(prev, topo);
        carried.timestamp = snap.interval;
        carried = best_fit_repair(std::move(carried), topo, snap);
        auto const c = cost_of(carried);
        if (c < best)
        {
            best = c;
            p = std::move(carried);
        }
    }

    for (;;)
    {
        double move_cost = best;
        std::size_t move_s = n_s, move_f = n_f;
        fog_usage usage(p, snap, topo);
        auto trial = p;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            for (std::size_t f = 0; f < n_f; ++f)
            {
                auto const deployed = p.on_fog(s, f);
                if (!deployed && !usage.fits(s, f)) continue;
                trial.fog(s, f) = deployed ? 0 : 1;
                route_to_cloud(trial, snap, topo);
                auto const c = cost_of(trial);
                if (c < move_cost)
                {
                    move_cost = c;
                    move_s = s;
                    move_f = f;
                }
                trial.fog(s, f) = deployed ? 1 : 0;
            }
        }
        if (move_s == n_s)
        {
            break;
        }
        p.fog(move_s, move_f) ^= 1;
        route_to_cloud(p, snap, topo);
        best = move_cost;
    }
    return p;
}

/// The optimizer with every iteration a global PSO sweep.
inline placement_state pure_bpso(const swarm_config& cfg, const topology& topo, const traffic_snapshot& snap,
                                 const placement_state& prev, const cost_rates& rates, const delay_params& dparams = {})
{
    return solve(cfg, topo, snap, prev, rates, dparams, search_mode::pso_only).placement;
}

} // namespace fogplace

#endif // FOGPLACE_BASELINES_HPP
