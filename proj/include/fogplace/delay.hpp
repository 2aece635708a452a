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
 * \file fogplace/delay.hpp
 *
 * \brief Instruction load, dedicated capacity and per-request delay.
 *
 * Every deployed service instance is modeled as an M/M/1 queue whose
 * service rate is mu = Gamma / R_proc (requests/s). A fog instance sees the
 * requests arriving at its node; a cloud instance sees the aggregate of the
 * requests rejected by every fog node that offloads to it. The end-to-end
 * delay of a request is a deterministic part (propagation plus
 * transmission on every hop) plus the M/M/1 sojourn time, whose tail is
 * exponential with rate (mu - lambda). A queue with lambda >= mu is
 * overloaded: its delay is the ceiling d_max_ms and every request misses
 * its threshold.
 */

#ifndef FOGPLACE_DELAY_HPP
#define FOGPLACE_DELAY_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fogplace/matrix.hpp>
#include <fogplace/model.hpp>
#include <fogplace/traffic.hpp>
#include <limits>
#include <utility>
#include <vector>

namespace fogplace {

struct delay_params
{
    double d_max_ms = 150; ///< delay ceiling for overloaded queues
    double startup_ms = 50; ///< container startup time
};

/// Default delay ceiling: ten times the largest delay threshold.
inline double default_d_max(const std::vector<service_spec>& services)
{
    double th = 0;
    for (auto const& s : services) th = std::max(th, s.delay_threshold);
    return th > 0 ? 10.0 * th : 1000.0;
}

struct load_profile
{
    matrix<double> psi_fog; ///< |S| x |F|, MIPS arriving at fog nodes
    matrix<double> psi_cloud; ///< |S| x |C|, MIPS forwarded to cloud servers
    matrix<double> gamma_fog; ///< |S| x |F|, MIPS dedicated on fog nodes
    matrix<double> gamma_cloud; ///< |S| x |C|, MIPS dedicated on cloud servers
};

inline matrix<double> compute_psi_fog(const traffic_snapshot& snap, const std::vector<service_spec>& services)
{
    matrix<double> psi(snap.rates.rows(), snap.rates.cols(), 0.0);
    for (std::size_t s = 0; s < psi.rows(); ++s)
    {
        for (std::size_t f = 0; f < psi.cols(); ++f)
        {
            psi(s, f) = services[s].proc_demand * snap.rates(s, f);
        }
    }
    return psi;
}

/// Rejected instruction rate reaching each cloud server; traffic of
/// services deployed on the fog node is not forwarded.
inline matrix<double> compute_psi_cloud(const matrix<double>& psi_fog, const placement_state& p, const topology& topo)
{
    matrix<double> psi(topo.n_services(), topo.n_cloud(), 0.0);
    for (std::size_t s = 0; s < topo.n_services(); ++s)
    {
        for (std::size_t f = 0; f < topo.n_fog(); ++f)
        {
            if (!p.on_fog(s, f))
            {
                psi(s, topo.offload_target(s, f)) += psi_fog(s, f);
            }
        }
    }
    return psi;
}

/// Capacity shares: each deployed service gets the fraction of its node's
/// MIPS proportional to its R_proc among the services on that node.
inline std::pair<matrix<double>, matrix<double>> compute_gamma(const placement_state& p, const topology& topo)
{
    auto const n_s = topo.n_services();
    matrix<double> g_fog(n_s, topo.n_fog(), 0.0);
    matrix<double> g_cloud(n_s, topo.n_cloud(), 0.0);

    for (std::size_t f = 0; f < topo.n_fog(); ++f)
    {
        double demand = 0;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            if (p.on_fog(s, f)) demand += topo.services[s].proc_demand;
        }
        if (demand <= 0) continue;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            if (p.on_fog(s, f))
            {
                g_fog(s, f) = topo.services[s].proc_demand / demand * topo.fog_nodes[f].proc_cap;
            }
        }
    }
    for (std::size_t k = 0; k < topo.n_cloud(); ++k)
    {
        double demand = 0;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            if (p.on_cloud(s, k)) demand += topo.services[s].proc_demand;
        }
        if (demand <= 0) continue;
        for (std::size_t s = 0; s < n_s; ++s)
        {
            if (p.on_cloud(s, k))
            {
                g_cloud(s, k) = topo.services[s].proc_demand / demand * topo.cloud_servers[k].proc_cap;
            }
        }
    }
    return {std::move(g_fog), std::move(g_cloud)};
}

inline load_profile compute_load(const placement_state& p, const traffic_snapshot& snap, const topology& topo)
{
    load_profile load;
    load.psi_fog = compute_psi_fog(snap, topo.services);
    load.psi_cloud = compute_psi_cloud(load.psi_fog, p, topo);
    std::tie(load.gamma_fog, load.gamma_cloud) = compute_gamma(p, topo);
    return load;
}

/// Milliseconds needed to push `bytes` through a link of `bits_per_s`.
inline double transmission_ms(double bytes, double bits_per_s)
{
    return bytes * 8.0 / bits_per_s * 1000.0;
}

/// Propagation plus transmission for a request served on its fog node.
inline double fog_fixed_delay_ms(const service_spec& s, const fog_node_spec& f)
{
    return 2.0 * f.prop_iot_ms + transmission_ms(s.request_size + s.response_size, f.link_rate_iot);
}

/// Propagation plus transmission for a request forwarded to the cloud.
inline double cloud_fixed_delay_ms(const service_spec& s, const fog_node_spec& f)
{
    return fog_fixed_delay_ms(s, f) + 2.0 * f.prop_cloud_ms
           + transmission_ms(s.request_size + s.response_size, f.link_rate_cloud);
}

/// The queue serving requests of one (service, fog node) pair.
struct queue_state
{
    double fixed_ms = 0; ///< deterministic part of the delay
    double service_rate = 0; ///< mu, requests/s
    double arrival_rate = 0; ///< lambda, requests/s (whole queue)
    bool via_cloud = false;

    bool overloaded() const noexcept { return arrival_rate >= service_rate; }
};

inline queue_state serving_queue(std::size_t s, std::size_t f, const placement_state& p, const load_profile& load,
                                 const topology& topo)
{
    auto const& svc = topo.services[s];
    auto const& node = topo.fog_nodes[f];
    queue_state q;
    if (p.on_fog(s, f))
    {
        q.fixed_ms = fog_fixed_delay_ms(svc, node);
        q.service_rate = load.gamma_fog(s, f) / svc.proc_demand;
        q.arrival_rate = load.psi_fog(s, f) / svc.proc_demand;
    }
    else
    {
        auto const k = topo.offload_target(s, f);
        q.fixed_ms = cloud_fixed_delay_ms(svc, node);
        q.service_rate = load.gamma_cloud(s, k) / svc.proc_demand;
        q.arrival_rate = load.psi_cloud(s, k) / svc.proc_demand;
        q.via_cloud = true;
    }
    return q;
}

/// Mean end-to-end delay in ms: fixed part plus the M/M/1 sojourn
/// 1/(mu - lambda), capped at d_max_ms; overload gives d_max_ms.
inline double service_delay(const queue_state& q, double d_max_ms)
{
    if (q.overloaded())
    {
        return d_max_ms;
    }
    return std::min(d_max_ms, q.fixed_ms + 1000.0 / (q.service_rate - q.arrival_rate));
}

inline double service_delay(std::size_t s, std::size_t f, const placement_state& p, const load_profile& load,
                            const topology& topo, double d_max_ms)
{
    return service_delay(serving_queue(s, f, p, load, topo), d_max_ms);
}

/// P(delay > threshold_ms) with an exponentially distributed sojourn.
inline double violation_prob(const queue_state& q, double threshold_ms)
{
    if (q.overloaded() || threshold_ms <= q.fixed_ms)
    {
        return 1.0;
    }
    auto const slack_s = (threshold_ms - q.fixed_ms) / 1000.0;
    return std::clamp(std::exp(-(q.service_rate - q.arrival_rate) * slack_s), 0.0, 1.0);
}

/// Violation probability when delays never exceed the ceiling d_max_ms:
/// thresholds at or above it cannot be missed.
inline double violation_prob(const queue_state& q, double threshold_ms, double d_max_ms)
{
    if (threshold_ms >= d_max_ms)
    {
        return 0.0;
    }
    return violation_prob(q, threshold_ms);
}

/// Container download plus startup, in ms.
inline double deploy_delay(const service_spec& s, const fog_node_spec& f, double startup_ms)
{
    return s.stor_demand / f.fsc_rate * 1000.0 + startup_ms;
}

/// Per-pair delay figures for one placement and snapshot.
///
/// Pairs without requests have violation probability 0, are never marked
/// overloaded and reject nothing; their service_delay_ms is what a request
/// would experience on the current route.
struct delay_report
{
    matrix<double> service_delay_ms; ///< |S| x |F|
    matrix<double> deploy_delay_ms; ///< |S| x |F|
    matrix<double> violation_prob; ///< |S| x |F|
    matrix<std::uint8_t> overloaded; ///< |S| x |F|
    matrix<double> rejected_rate; ///< |S| x |F|, requests/s the serving queue cannot absorb
};

inline delay_report compute_delays(const placement_state& p, const traffic_snapshot& snap, const load_profile& load,
                                   const topology& topo, const delay_params& params)
{
    auto const n_s = topo.n_services();
    auto const n_f = topo.n_fog();
    delay_report r{matrix<double>(n_s, n_f, 0.0), matrix<double>(n_s, n_f, 0.0), matrix<double>(n_s, n_f, 0.0),
                   matrix<std::uint8_t>(n_s, n_f, 0), matrix<double>(n_s, n_f, 0.0)};
    for (std::size_t s = 0; s < n_s; ++s)
    {
        for (std::size_t f = 0; f < n_f; ++f)
        {
            auto const q = serving_queue(s, f, p, load, topo);
            r.service_delay_ms(s, f) = service_delay(q, params.d_max_ms);
            r.deploy_delay_ms(s, f) = deploy_delay(topo.services[s], topo.fog_nodes[f], params.startup_ms);
            auto const t = snap.rates(s, f);
            if (t > 0)
            {
                r.violation_prob(s, f) = violation_prob(q, topo.services[s].delay_threshold, params.d_max_ms);
                if (q.overloaded())
                {
                    r.overloaded(s, f) = 1;
                    r.rejected_rate(s, f) = t * (1.0 - q.service_rate / q.arrival_rate);
                }
            }
        }
    }
    return r;
}

} // namespace fogplace

#endif // FOGPLACE_DELAY_HPP
