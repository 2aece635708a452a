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

#ifndef FOGPLACE_TESTS_FIXTURES_HPP
#define FOGPLACE_TESTS_FIXTURES_HPP

#include <cstdint>
#include <fogplace/fogplace.hpp>
#include <random>

namespace fixture {

using namespace fogplace;

inline fog_node_spec fog_node(std::size_t id, double mips, double mem_gb = 8, double stor_gb = 16)
{
    fog_node_spec f;
    f.id = id;
    f.proc_cap = mips;
    f.mem_cap = mem_gb * 1e9;
    f.stor_cap = stor_gb * 1e9;
    f.fsc_rate = 1.25e9;
    f.prop_iot_ms = 1.5;
    f.prop_cloud_ms = 20;
    f.link_rate_iot = 10e9;
    f.link_rate_cloud = 10e9;
    return f;
}

inline cloud_server_spec cloud_server(std::size_t id, double mips, double mem_gb = 32, double stor_gb = 200)
{
    return {id, mips, mem_gb * 1e9, stor_gb * 1e9};
}

inline service_spec service(std::size_t id, double proc_mi, double mem_mb = 100, double stor_gb = 0.5,
                            double qos = 0.9, double th_ms = 12)
{
    service_spec s;
    s.id = id;
    s.proc_demand = proc_mi;
    s.mem_demand = mem_mb * 1e6;
    s.stor_demand = stor_gb * 1e9;
    s.request_size = 16e3;
    s.response_size = 16;
    s.qos_level = qos;
    s.delay_threshold = th_ms;
    return s;
}

/// 2 fog nodes, 1 cloud server, 2 light services; small enough to
/// enumerate and loaded enough that the best placement is not trivial.
struct tiny
{
    topology topo;
    traffic_snapshot snap;
    cost_rates rates;
    delay_params delays;

    tiny()
    {
        topo.fog_nodes = {fog_node(0, 1000), fog_node(1, 900)};
        topo.cloud_servers = {cloud_server(0, 20000)};
        topo.services = {service(0, 4, 100, 0.5, 0.9, 12), service(1, 6, 150, 1.0, 0.85, 14)};
        topo.offload_target = matrix<std::size_t>(2, 2, 0);
        snap = zero_snapshot(topo);
        snap.rates(0, 0) = 60;
        snap.rates(0, 1) = 20;
        snap.rates(1, 0) = 30;
        snap.rates(1, 1) = 90;
        delays.d_max_ms = 140;
    }
};

/// Random instance whose capacities bind now and then.
inline topology random_topology(std::mt19937_64& gen, std::size_t n_fog, std::size_t n_cloud, std::size_t n_services)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto U = [&](double lo, double hi) { return lo + (hi - lo) * u(gen); };
    topology topo;
    for (std::size_t f = 0; f < n_fog; ++f)
    {
        auto node = fog_node(f, U(800, 1300), U(0.3, 1.2), U(1, 4));
        node.prop_iot_ms = U(1, 2);
        node.prop_cloud_ms = U(15, 35);
        topo.fog_nodes.push_back(node);
    }
    for (std::size_t k = 0; k < n_cloud; ++k) topo.cloud_servers.push_back(cloud_server(k, U(16000, 26000), U(1, 4), U(4, 10)));
    for (std::size_t s = 0; s < n_services; ++s)
    {
        topo.services.push_back(service(s, U(5, 200), U(50, 400), U(0.2, 1.5), U(0.8, 0.99), U(10, 15)));
    }
    topo.offload_target = matrix<std::size_t>(n_services, n_fog, 0);
    if (n_cloud > 0)
    {
        std::uniform_int_distribution<std::size_t> pick(0, n_cloud - 1);
        for (auto& k : topo.offload_target.data()) k = pick(gen);
    }
    return topo;
}

inline traffic_snapshot random_snapshot(std::mt19937_64& gen, const topology& topo, double max_rate = 6,
                                        double zero_prob = 0.2)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto snap = zero_snapshot(topo);
    for (auto& r : snap.rates.data()) r = u(gen) < zero_prob ? 0.0 : max_rate * u(gen);
    return snap;
}

inline placement_state random_placement(std::mt19937_64& gen, const topology& topo, const traffic_snapshot& snap,
                                        double density = 0.5)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto p = new_placement(topo);
    for (auto& b : p.fog.data()) b = u(gen) < density ? 1 : 0;
    route_to_cloud(p, snap, topo);
    return p;
}

} // namespace fixture

#endif // FOGPLACE_TESTS_FIXTURES_HPP
