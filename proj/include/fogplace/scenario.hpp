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
 * \file fogplace/scenario.hpp
 *
 * \brief Scenario configuration, INI loading and seeded topology sampling.
 *
 * A scenario file is INI with the sections [scenario], [services],
 * [fog_nodes], [cloud_servers], [costs], [optimizer], [traffic] and
 * [baselines]. Sampled attributes are written as "lo hi" (uniform on
 * [lo, hi]) or as a single value. Entity sections need a count unless
 * [scenario] names a preset, whose values the file then overrides.
 * Comments start with ';'.
 *
 *     [scenario]
 *     preset = experiment3
 *     seed = 7
 *
 *     [services]
 *     proc_mi = 1 5
 */

#ifndef FOGPLACE_SCENARIO_HPP
#define FOGPLACE_SCENARIO_HPP

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <cstddef>
#include <cstdint>
#include <fogplace/baselines.hpp>
#include <fogplace/cost.hpp>
#include <fogplace/delay.hpp>
#include <fogplace/model.hpp>
#include <fogplace/optimizer.hpp>
#include <fogplace/random.hpp>
#include <fogplace/text.hpp>
#include <fogplace/traffic.hpp>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogplace {

class scenario_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

struct value_range
{
    double lo = 0;
    double hi = 0;

    double sample(rng_stream& rng) const { return lo == hi ? lo : rng.uniform(lo, hi); }

    friend bool operator==(const value_range&, const value_range&) = default;
};

struct scenario_config
{
    std::string name = "custom";
    std::uint64_t seed = 1;
    std::size_t n_intervals = 60;
    double tau_s = 120; ///< reconfiguration period
    double traffic_period_s = 60; ///< seconds per trace snapshot
    std::optional<double> d_max_ms; ///< default: ten times the largest threshold
    double startup_ms = 50;
    bool stall_on_deploy = false; ///< newly deployed pairs pay the deploy delay once

    std::size_t n_services = 0;
    value_range proc_mi{50, 200};
    value_range mem_mb{50, 200};
    value_range stor_gb{0.2, 1.5};
    value_range request_kb{10, 26};
    value_range response_b{10, 20};
    value_range qos_level{0.8, 0.99};
    value_range threshold_ms{10, 15};

    std::size_t n_fog = 0;
    value_range fog_proc_mips{800, 1300};
    value_range fog_mem_gb{4, 16};
    value_range fog_stor_gb{10, 25};
    value_range prop_iot_ms{1, 2};
    value_range prop_cloud_ms{15, 35};
    value_range link_iot_gbps{10, 10};
    value_range link_cloud_gbps{10, 10};
    value_range fsc_gbps{10, 10};

    std::size_t n_cloud = 0;
    value_range cloud_proc_mips{16000, 26000};
    value_range cloud_mem_gb{8, 32};
    value_range cloud_stor_gb{100, 250};

    cost_rates rates;
    value_range c_viol{100, 200}; ///< per-service violation price
    swarm_config swarm;
    synth_config traffic;
    min_viol_config min_viol;
};

inline void validate(const scenario_config& c)
{
    auto check = [](const value_range& r, const char* name) {
        if (!(r.lo <= r.hi)) throw scenario_error(std::string(name) + ": low must be <= high");
    };
    check(c.proc_mi, "proc_mi");
    check(c.mem_mb, "mem_mb");
    check(c.stor_gb, "stor_gb");
    check(c.request_kb, "request_kb");
    check(c.response_b, "response_b");
    check(c.qos_level, "qos_level");
    check(c.threshold_ms, "threshold_ms");
    check(c.fog_proc_mips, "fog proc_mips");
    check(c.fog_mem_gb, "fog mem_gb");
    check(c.fog_stor_gb, "fog stor_gb");
    check(c.prop_iot_ms, "prop_iot_ms");
    check(c.prop_cloud_ms, "prop_cloud_ms");
    check(c.link_iot_gbps, "link_iot_gbps");
    check(c.link_cloud_gbps, "link_cloud_gbps");
    check(c.fsc_gbps, "fsc_gbps");
    check(c.cloud_proc_mips, "cloud proc_mips");
    check(c.cloud_mem_gb, "cloud mem_gb");
    check(c.cloud_stor_gb, "cloud stor_gb");
    check(c.c_viol, "c_viol");
    if (!(c.tau_s > 0)) throw scenario_error("tau_s must be > 0");
    if (!(c.traffic_period_s > 0)) throw scenario_error("traffic_period_s must be > 0");
    if (c.n_intervals < 1) throw scenario_error("n_intervals must be >= 1");
    if (c.n_services * c.n_fog > 0 && c.n_cloud == 0) throw scenario_error("at least one cloud server is required");
    validate(c.rates);
    validate(c.swarm);
    validate(c.min_viol);
}

/// Table-3 sized scenarios; 1 to 3.
inline scenario_config preset(std::string_view name)
{
    scenario_config c;
    c.name = std::string(name);
    if (name == "experiment1")
    {
        c.n_fog = 10;
        c.n_cloud = 3;
        c.n_services = 40;
    }
    else if (name == "experiment2")
    {
        c.n_fog = 10;
        c.n_cloud = 5;
        c.n_services = 50;
    }
    else if (name == "experiment3")
    {
        c.n_fog = 10;
        c.n_cloud = 5;
        c.n_services = 20;
        c.tau_s = 10;
        c.traffic_period_s = 10;
    }
    else
    {
        throw scenario_error("unknown preset '" + std::string(name) + "'");
    }
    return c;
}

namespace detail {

using ptree = boost::property_tree::ptree;

class section_reader
{
public:
    section_reader(const ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

    bool has(const std::string& key) const { return tree_ && tree_->find(key) != tree_->not_found(); }

    std::string raw(const std::string& key) const
    {
        seen_.push_back(key);
        return tree_->get<std::string>(key);
    }

    void number(const std::string& key, double& out) const
    {
        if (!has(key)) return;
        auto const v = parse_double(raw(key));
        if (!v) fail(key, "expected a number");
        out = *v;
    }

    template <typename Int>
    void count(const std::string& key, Int& out) const
    {
        if (!has(key)) return;
        auto const v = parse_uint(raw(key));
        if (!v) fail(key, "expected a non-negative integer");
        out = static_cast<Int>(*v);
    }

    void range(const std::string& key, value_range& out) const
    {
        if (!has(key)) return;
        auto const text = raw(key);
        std::vector<double> parts;
        for (auto tok : split(trim(text), ' '))
        {
            if (trim(tok).empty()) continue;
            auto const v = parse_double(tok);
            if (!v) fail(key, "expected 'lo hi' or a single number");
            parts.push_back(*v);
        }
        if (parts.size() == 1) out = {parts[0], parts[0]};
        else if (parts.size() == 2) out = {parts[0], parts[1]};
        else fail(key, "expected 'lo hi' or a single number");
    }

    void flag(const std::string& key, bool& out) const
    {
        if (!has(key)) return;
        auto const v = trim(raw(key));
        if (v == "true" || v == "1" || v == "yes") out = true;
        else if (v == "false" || v == "0" || v == "no") out = false;
        else fail(key, "expected true or false");
    }

    void text(const std::string& key, std::string& out) const
    {
        if (has(key)) out = std::string(trim(raw(key)));
    }

    /// Every key of the section must have been consumed.
    void finish() const
    {
        if (!tree_) return;
        for (auto const& [key, _] : *tree_)
        {
            if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
            {
                throw scenario_error("[" + name_ + "] unknown key '" + key + "'");
            }
        }
    }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const
    {
        throw scenario_error("[" + name_ + "] " + key + ": " + what);
    }

private:
    const ptree* tree_;
    std::string name_;
    mutable std::vector<std::string> seen_;
};

} // namespace detail

/// Reads a scenario file. A missing entity count, with no preset to fall
/// back on, raises scenario_error naming the key.
inline scenario_config parse_scenario(std::istream& in)
{
    detail::ptree tree;
    try
    {
        boost::property_tree::ini_parser::read_ini(in, tree);
    }
    catch (const boost::property_tree::ini_parser_error& e)
    {
        throw scenario_error(e.what());
    }

    static const std::vector<std::string> known = {"scenario", "services",  "fog_nodes", "cloud_servers",
                                                   "costs",    "optimizer", "traffic",   "baselines"};
    for (auto const& [name, _] : tree)
    {
        if (std::find(known.begin(), known.end(), name) == known.end())
        {
            throw scenario_error("unknown section [" + name + "]");
        }
    }
    auto section = [&](const std::string& name) {
        auto it = tree.find(name);
        return detail::section_reader(it == tree.not_found() ? nullptr : &it->second, name);
    };

    scenario_config c;
    bool from_preset = false;
    {
        auto const r = section("scenario");
        if (r.has("preset"))
        {
            c = preset(trim(r.raw("preset")));
            from_preset = true;
        }
        r.text("name", c.name);
        r.count("seed", c.seed);
        r.count("n_intervals", c.n_intervals);
        r.number("tau_s", c.tau_s);
        r.number("traffic_period_s", c.traffic_period_s);
        if (r.has("d_max_ms"))
        {
            double v = 0;
            r.number("d_max_ms", v);
            c.d_max_ms = v;
        }
        r.number("startup_ms", c.startup_ms);
        r.flag("stall_on_deploy", c.stall_on_deploy);
        r.finish();
    }
    auto require_count = [&](const detail::section_reader& r, const std::string& sec, std::size_t& out) {
        if (!r.has("count"))
        {
            if (!from_preset) throw scenario_error("missing required key " + sec + ".count");
            return;
        }
        r.count("count", out);
    };
    {
        auto const r = section("services");
        require_count(r, "services", c.n_services);
        r.range("proc_mi", c.proc_mi);
        r.range("mem_mb", c.mem_mb);
        r.range("stor_gb", c.stor_gb);
        r.range("request_kb", c.request_kb);
        r.range("response_b", c.response_b);
        r.range("qos_level", c.qos_level);
        r.range("threshold_ms", c.threshold_ms);
        r.finish();
    }
    {
        auto const r = section("fog_nodes");
        require_count(r, "fog_nodes", c.n_fog);
        r.range("proc_mips", c.fog_proc_mips);
        r.range("mem_gb", c.fog_mem_gb);
        r.range("stor_gb", c.fog_stor_gb);
        r.range("prop_iot_ms", c.prop_iot_ms);
        r.range("prop_cloud_ms", c.prop_cloud_ms);
        r.range("link_iot_gbps", c.link_iot_gbps);
        r.range("link_cloud_gbps", c.link_cloud_gbps);
        r.range("fsc_gbps", c.fsc_gbps);
        r.finish();
    }
    {
        auto const r = section("cloud_servers");
        require_count(r, "cloud_servers", c.n_cloud);
        r.range("proc_mips", c.cloud_proc_mips);
        r.range("mem_gb", c.cloud_mem_gb);
        r.range("stor_gb", c.cloud_stor_gb);
        r.finish();
    }
    {
        auto const r = section("costs");
        r.number("c_proc", c.rates.c_proc);
        r.number("c_stor_fog", c.rates.c_stor_fog);
        r.number("c_stor_cloud", c.rates.c_stor_cloud);
        r.number("c_comm_fc", c.rates.c_comm_fc);
        r.number("c_comm_fsc", c.rates.c_comm_fsc);
        r.range("c_viol", c.c_viol);
        r.number("c_wrong", c.rates.c_wrong);
        r.number("c_delay", c.rates.c_delay);
        r.number("c_deploy", c.rates.c_deploy);
        r.number("impact_coefficient", c.rates.impact_coefficient);
        r.number("infeasibility_penalty", c.rates.infeasibility_penalty);
        r.finish();
    }
    {
        auto const r = section("optimizer");
        auto& s = c.swarm;
        r.count("n_particles", s.n_particles);
        r.count("max_iter", s.max_iter);
        r.count("gamma", s.gamma);
        r.number("init_ke", s.init_ke);
        value_range v{s.v_min, s.v_max};
        r.range("velocity", v);
        s.v_min = v.lo;
        s.v_max = v.hi;
        r.number("min_ke_loss_per", s.min_ke_loss_per);
        r.number("inter_prob", s.inter_prob);
        value_range a{s.alpha_i, s.alpha_f};
        r.range("alpha", a);
        s.alpha_i = a.lo;
        s.alpha_f = a.hi;
        value_range b{s.beta_i, s.beta_f};
        r.range("beta", b);
        s.beta_i = b.lo;
        s.beta_f = b.hi;
        r.count("collision_steps", s.collision_steps);
        r.number("omega_floor", s.omega_floor);
        r.flag("invert_inter_prob", s.invert_inter_prob);
        r.flag("early_exit", s.early_exit);
        r.finish();
    }
    {
        auto const r = section("traffic");
        auto& t = c.traffic;
        if (r.has("profile"))
        {
            try
            {
                t.profile = parse_traffic_profile(trim(r.raw("profile")));
            }
            catch (const std::invalid_argument& e)
            {
                r.fail("profile", e.what());
            }
        }
        r.number("base_rate", t.base_rate);
        r.number("heterogeneity", t.heterogeneity);
        r.number("amplitude", t.amplitude);
        r.number("period_intervals", t.period_intervals);
        r.number("spike_prob", t.spike_prob);
        r.number("spike_factor", t.spike_factor);
        r.number("min_rate", t.min_rate);
        r.number("max_rate", t.max_rate);
        r.finish();
    }
    {
        auto const r = section("baselines");
        r.number("theta_up", c.min_viol.theta_up);
        r.number("hysteresis", c.min_viol.hysteresis);
        r.finish();
    }
    c.rates.tau_s = c.tau_s;
    c.traffic.traffic_period_s = c.traffic_period_s;
    try
    {
        validate(c);
    }
    catch (const std::invalid_argument& e)
    {
        throw scenario_error(e.what());
    }
    return c;
}

inline scenario_config load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw scenario_error("cannot open scenario file '" + path + "'");
    }
    return parse_scenario(in);
}

/// A sampled, ready-to-run scenario.
struct scenario
{
    scenario_config config;
    topology topo;
    cost_rates rates;
    delay_params delays;
};

/// Samples every attribute from its configured range. Services, fog nodes,
/// cloud servers, offload targets and violation prices use separate
/// streams derived from the seed.
inline scenario build_scenario(const scenario_config& cfg)
{
    validate(cfg);
    scenario out;
    out.config = cfg;
    auto& topo = out.topo;

    rng_stream srng(derive_seed(cfg.seed, 101));
    for (std::size_t s = 0; s < cfg.n_services; ++s)
    {
        service_spec svc;
        svc.id = s;
        svc.proc_demand = cfg.proc_mi.sample(srng);
        svc.mem_demand = cfg.mem_mb.sample(srng) * bytes_per_mb;
        svc.stor_demand = cfg.stor_gb.sample(srng) * bytes_per_gb;
        svc.request_size = cfg.request_kb.sample(srng) * 1e3;
        svc.response_size = cfg.response_b.sample(srng);
        svc.qos_level = cfg.qos_level.sample(srng);
        svc.delay_threshold = cfg.threshold_ms.sample(srng);
        topo.services.push_back(svc);
    }
    rng_stream frng(derive_seed(cfg.seed, 102));
    for (std::size_t f = 0; f < cfg.n_fog; ++f)
    {
        fog_node_spec node;
        node.id = f;
        node.proc_cap = cfg.fog_proc_mips.sample(frng);
        node.mem_cap = cfg.fog_mem_gb.sample(frng) * bytes_per_gb;
        node.stor_cap = cfg.fog_stor_gb.sample(frng) * bytes_per_gb;
        node.prop_iot_ms = cfg.prop_iot_ms.sample(frng);
        node.prop_cloud_ms = cfg.prop_cloud_ms.sample(frng);
        node.link_rate_iot = cfg.link_iot_gbps.sample(frng) * 1e9;
        node.link_rate_cloud = cfg.link_cloud_gbps.sample(frng) * 1e9;
        node.fsc_rate = cfg.fsc_gbps.sample(frng) * 1e9 / 8.0;
        topo.fog_nodes.push_back(node);
    }
    rng_stream crng(derive_seed(cfg.seed, 103));
    for (std::size_t k = 0; k < cfg.n_cloud; ++k)
    {
        cloud_server_spec server;
        server.id = k;
        server.proc_cap = cfg.cloud_proc_mips.sample(crng);
        server.mem_cap = cfg.cloud_mem_gb.sample(crng) * bytes_per_gb;
        server.stor_cap = cfg.cloud_stor_gb.sample(crng) * bytes_per_gb;
        topo.cloud_servers.push_back(server);
    }
    topo.offload_target = matrix<std::size_t>(cfg.n_services, cfg.n_fog, 0);
    if (cfg.n_cloud > 0)
    {
        rng_stream hrng(derive_seed(cfg.seed, 104));
        for (auto& k : topo.offload_target.data()) k = hrng.index(cfg.n_cloud);
    }
    validate(topo);

    out.rates = cfg.rates;
    out.rates.tau_s = cfg.tau_s;
    rng_stream vrng(derive_seed(cfg.seed, 105));
    out.rates.c_viol_per_service.clear();
    for (std::size_t s = 0; s < cfg.n_services; ++s)
    {
        out.rates.c_viol_per_service.push_back(cfg.c_viol.sample(vrng));
    }
    out.delays.startup_ms = cfg.startup_ms;
    out.delays.d_max_ms = cfg.d_max_ms ? *cfg.d_max_ms : default_d_max(topo.services);
    return out;
}

/// Synthetic trace for the scenario, seeded from the scenario seed.
inline trace_schedule make_schedule(const scenario& scn)
{
    auto tcfg = scn.config.traffic;
    tcfg.traffic_period_s = scn.config.traffic_period_s;
    return synth_trace(scn.topo, scn.config.n_intervals, derive_seed(scn.config.seed, 106), tcfg);
}

} // namespace fogplace

#endif // FOGPLACE_SCENARIO_HPP
