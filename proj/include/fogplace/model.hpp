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
 * \file fogplace/model.hpp
 *
 * \brief Services, fog nodes, cloud servers and the placement matrices.
 *
 * Units used throughout the library:
 * - processing demand in MI per request, capacities in MIPS;
 * - memory and storage in bytes;
 * - link and FSC rates as noted on each field;
 * - delays in milliseconds, rates in requests per second.
 */

#ifndef FOGPLACE_MODEL_HPP
#define FOGPLACE_MODEL_HPP

#include <cstddef>
#include <cstdint>
#include <fogplace/matrix.hpp>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fogplace {

inline constexpr double bytes_per_gb = 1e9;
inline constexpr double bytes_per_mb = 1e6;

struct service_spec
{
    std::size_t id = 0;
    double proc_demand = 0; ///< MI per request
    double mem_demand = 0; ///< bytes
    double stor_demand = 0; ///< bytes (container image)
    double request_size = 0; ///< bytes
    double response_size = 0; ///< bytes
    double qos_level = 0.9; ///< fraction of requests that must meet delay_threshold
    double delay_threshold = 10; ///< ms
};

struct fog_node_spec
{
    std::size_t id = 0;
    double proc_cap = 0; ///< MIPS
    double mem_cap = 0; ///< bytes
    double stor_cap = 0; ///< bytes
    double fsc_rate = 0; ///< bytes/s from the image store to this node
    double prop_iot_ms = 0; ///< one-way IoT <-> fog propagation
    double prop_cloud_ms = 0; ///< one-way fog <-> cloud propagation
    double link_rate_iot = 0; ///< bits/s
    double link_rate_cloud = 0; ///< bits/s
};

struct cloud_server_spec
{
    std::size_t id = 0;
    double proc_cap = 0; ///< MIPS
    double mem_cap = 0; ///< bytes
    double stor_cap = 0; ///< bytes
};

/// Throws std::invalid_argument naming the first broken invariant.
inline void validate(const service_spec& s)
{
    auto fail = [&](const char* what) {
        throw std::invalid_argument("service " + std::to_string(s.id) + ": " + what);
    };
    if (!(s.proc_demand > 0)) fail("proc_demand must be > 0");
    if (!(s.mem_demand > 0)) fail("mem_demand must be > 0");
    if (!(s.stor_demand > 0)) fail("stor_demand must be > 0");
    if (s.request_size < 0 || s.response_size < 0) fail("message sizes must be >= 0");
    if (!(s.qos_level > 0 && s.qos_level < 1)) fail("qos_level must be in (0,1)");
    if (!(s.delay_threshold > 0)) fail("delay_threshold must be > 0");
}

inline void validate(const fog_node_spec& f)
{
    auto fail = [&](const char* what) {
        throw std::invalid_argument("fog node " + std::to_string(f.id) + ": " + what);
    };
    if (!(f.proc_cap > 0)) fail("proc_cap must be > 0");
    if (!(f.mem_cap > 0)) fail("mem_cap must be > 0");
    if (!(f.stor_cap > 0)) fail("stor_cap must be > 0");
    if (!(f.fsc_rate > 0)) fail("fsc_rate must be > 0");
    if (!(f.prop_iot_ms > 0)) fail("prop_iot_ms must be > 0");
    if (!(f.prop_cloud_ms > 0)) fail("prop_cloud_ms must be > 0");
    if (!(f.link_rate_iot > 0)) fail("link_rate_iot must be > 0");
    if (!(f.link_rate_cloud > 0)) fail("link_rate_cloud must be > 0");
}

inline void validate(const cloud_server_spec& c)
{
    auto fail = [&](const char* what) {
        throw std::invalid_argument("cloud server " + std::to_string(c.id) + ": " + what);
    };
    if (!(c.proc_cap > 0)) fail("proc_cap must be > 0");
    if (!(c.mem_cap > 0)) fail("mem_cap must be > 0");
    if (!(c.stor_cap > 0)) fail("stor_cap must be > 0");
}

/// Static description of the fog-cloud system.
///
/// offload_target(s, f) is the cloud server that receives the traffic of
/// service s rejected by fog node f (the h_s(f) mapping).
struct topology
{
    std::vector<fog_node_spec> fog_nodes;
    std::vector<cloud_server_spec> cloud_servers;
    std::vector<service_spec> services;
    matrix<std::size_t> offload_target; ///< |S| x |F|

    std::size_t n_fog() const noexcept { return fog_nodes.size(); }
    std::size_t n_cloud() const noexcept { return cloud_servers.size(); }
    std::size_t n_services() const noexcept { return services.size(); }
    std::size_t dimension() const noexcept { return fog_nodes.size() * services.size(); }
};

inline void validate(const topology& topo)
{
    for (auto const& s : topo.services) validate(s);
    for (auto const& f : topo.fog_nodes) validate(f);
    for (auto const& c : topo.cloud_servers) validate(c);

    if (topo.offload_target.rows() != topo.n_services() || topo.offload_target.cols() != topo.n_fog())
    {
        throw std::invalid_argument("offload_target must be |S| x |F|");
    }
    if (topo.n_services() > 0 && topo.n_fog() > 0 && topo.n_cloud() == 0)
    {
        throw std::invalid_argument("services on fog nodes need at least one cloud server");
    }
    for (std::size_t s = 0; s < topo.n_services(); ++s)
    {
        for (std::size_t f = 0; f < topo.n_fog(); ++f)
        {
            if (topo.offload_target(s, f) >= topo.n_cloud())
            {
                throw std::invalid_argument("offload_target(" + std::to_string(s) + "," + std::to_string(f)
                                            + ") is not a valid cloud index");
            }
        }
    }
}

/// Binary fog (P) and cloud (Q) placement matrices at interval t.
struct placement_state
{
    matrix<std::uint8_t> fog; ///< |S| x |F|
    matrix<std::uint8_t> cloud; ///< |S| x |C|
    std::size_t timestamp = 0;

    bool on_fog(std::size_t s, std::size_t f) const noexcept { return fog(s, f) != 0; }
    bool on_cloud(std::size_t s, std::size_t k) const noexcept { return cloud(s, k) != 0; }

    std::size_t fog_count() const noexcept
    {
        std::size_t n = 0;
        for (auto v : fog.data()) n += v;
        return n;
    }

    std::size_t cloud_count() const noexcept
    {
        std::size_t n = 0;
        for (auto v : cloud.data()) n += v;
        return n;
    }

    friend bool operator==(const placement_state&, const placement_state&) = default;
};

inline placement_state new_placement(const topology& topo)
{
    placement_state p;
    p.fog = matrix<std::uint8_t>(topo.n_services(), topo.n_fog(), 0);
    p.cloud = matrix<std::uint8_t>(topo.n_services(), topo.n_cloud(), 0);
    p.timestamp = 0;
    return p;
}

inline void check_dimensions(const placement_state& p, const topology& topo)
{
    if (p.fog.rows() != topo.n_services() || p.fog.cols() != topo.n_fog()
        || p.cloud.rows() != topo.n_services() || p.cloud.cols() != topo.n_cloud())
    {
        throw std::invalid_argument("placement dimensions do not match topology");
    }
    for (auto v : p.fog.data())
    {
        if (v > 1) throw std::invalid_argument("placement entries must be 0 or 1");
    }
    for (auto v : p.cloud.data())
    {
        if (v > 1) throw std::invalid_argument("placement entries must be 0 or 1");
    }
}

/// Dimension index of (service, fog node) in the particle position vector.
inline std::size_t flatten_index(std::size_t s, std::size_t f, std::size_t n_fog, std::size_t n_services)
{
    if (f >= n_fog || s >= n_services)
    {
        throw std::out_of_range("flatten_index: (s,f) out of range");
    }
    return s * n_fog + f;
}

/// Inverse of flatten_index: returns (service, fog node).
inline std::pair<std::size_t, std::size_t> unflatten_index(std::size_t i, std::size_t n_fog, std::size_t n_services)
{
    if (n_fog == 0 || i >= n_fog * n_services)
    {
        throw std::out_of_range("unflatten_index: dimension out of range");
    }
    auto const s = i / n_fog;
    return {s, i - n_fog * s};
}

// Text form:
//   placement <S> <F> <C> <t>
//   fog
//   <|S| rows of |F| characters 0/1>
//   cloud
//   <|S| rows of |C| characters 0/1>
//
// Empty rows are written as '-'.

inline void write_placement(std::ostream& os, const placement_state& p)
{
    auto dump = [&os](const matrix<std::uint8_t>& m) {
        for (std::size_t r = 0; r < m.rows(); ++r)
        {
            if (m.cols() == 0)
            {
                os << '-';
            }
            for (std::size_t c = 0; c < m.cols(); ++c)
            {
                os << (m(r, c) ? '1' : '0');
            }
            os << '\n';
        }
    };
    os << "placement " << p.fog.rows() << ' ' << p.fog.cols() << ' ' << p.cloud.cols() << ' ' << p.timestamp << '\n';
    os << "fog\n";
    dump(p.fog);
    os << "cloud\n";
    dump(p.cloud);
}

inline placement_state read_placement(std::istream& is)
{
    std::string tag;
    std::size_t n_s = 0, n_f = 0, n_c = 0, t = 0;
    if (!(is >> tag >> n_s >> n_f >> n_c >> t) || tag != "placement")
    {
        throw std::runtime_error("read_placement: bad header");
    }
    auto load = [&is](const char* section, std::size_t rows, std::size_t cols) {
        std::string word;
        if (!(is >> word) || word != section)
        {
            throw std::runtime_error(std::string("read_placement: expected section '") + section + "'");
        }
        matrix<std::uint8_t> m(rows, cols, 0);
        for (std::size_t r = 0; r < rows; ++r)
        {
            std::string line;
            if (!(is >> line))
            {
                throw std::runtime_error("read_placement: truncated matrix");
            }
            if (cols == 0 && line == "-")
            {
                continue;
            }
            if (line.size() != cols)
            {
                throw std::runtime_error("read_placement: row width mismatch");
            }
            for (std::size_t c = 0; c < cols; ++c)
            {
                if (line[c] != '0' && line[c] != '1')
                {
                    throw std::runtime_error("read_placement: entries must be 0 or 1");
                }
                m(r, c) = static_cast<std::uint8_t>(line[c] == '1');
            }
        }
        return m;
    };
    placement_state p;
    p.fog = load("fog", n_s, n_f);
    p.cloud = load("cloud", n_s, n_c);
    p.timestamp = t;
    return p;
}

inline std::string to_string(const placement_state& p)
{
    std::ostringstream os;
    write_placement(os, p);
    return os.str();
}

} // namespace fogplace

#endif // FOGPLACE_MODEL_HPP
