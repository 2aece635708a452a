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
 * \file fogplace/traffic.hpp
 *
 * \brief Per-interval request rates: trace ingestion and synthetic traces.
 *
 * Trace CSV format, one record per line:
 *
 *     interval,fog_id,service_id,requests_per_sec
 *
 * A header line is optional, blank lines and lines starting with '#' are
 * ignored. Records sharing (interval, fog_id, service_id) are summed and
 * pairs that are never listed have rate 0. A service_id of '*' gives the
 * aggregate rate of the fog node; it is split across services with the
 * per-scenario weights from service_split_weights().
 */

#ifndef FOGPLACE_TRAFFIC_HPP
#define FOGPLACE_TRAFFIC_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fogplace/matrix.hpp>
#include <fogplace/model.hpp>
#include <fogplace/random.hpp>
#include <fogplace/text.hpp>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fogplace {

/// Request rates T(s,f) in requests/s for one interval.
struct traffic_snapshot
{
    matrix<double> rates; ///< |S| x |F|
    std::size_t interval = 0;

    double rate(std::size_t s, std::size_t f) const noexcept { return rates(s, f); }

    double total() const noexcept
    {
        double sum = 0;
        for (auto r : rates.data()) sum += r;
        return sum;
    }

    friend bool operator==(const traffic_snapshot&, const traffic_snapshot&) = default;
};

struct trace_schedule
{
    std::vector<traffic_snapshot> snapshots;
    double traffic_period_s = 60; ///< seconds between consecutive snapshots

    friend bool operator==(const trace_schedule&, const trace_schedule&) = default;
};

class trace_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

inline traffic_snapshot zero_snapshot(const topology& topo, std::size_t interval = 0)
{
    return {matrix<double>(topo.n_services(), topo.n_fog(), 0.0), interval};
}

inline void validate(const trace_schedule& sched, const topology& topo)
{
    if (sched.snapshots.empty())
    {
        throw trace_error("no snapshots");
    }
    if (!(sched.traffic_period_s > 0))
    {
        throw trace_error("traffic period must be > 0");
    }
    for (std::size_t i = 0; i < sched.snapshots.size(); ++i)
    {
        auto const& snap = sched.snapshots[i];
        if (snap.rates.rows() != topo.n_services() || snap.rates.cols() != topo.n_fog())
        {
            throw trace_error("snapshot dimensions do not match topology");
        }
        if (i > 0 && snap.interval <= sched.snapshots[i - 1].interval)
        {
            throw trace_error("snapshot intervals must be strictly increasing");
        }
        for (auto r : snap.rates.data())
        {
            if (!(r >= 0) || !std::isfinite(r)) throw trace_error("rates must be finite and >= 0");
        }
    }
}

/// Weights splitting a fog node's aggregate rate across services; every
/// column sums to 1. Drawn once per scenario from the seed.
inline matrix<double> service_split_weights(const topology& topo, std::uint64_t seed)
{
    matrix<double> w(topo.n_services(), topo.n_fog(), 0.0);
    rng_stream rng(derive_seed(seed, 0x5117));
    for (std::size_t f = 0; f < topo.n_fog(); ++f)
    {
        double sum = 0;
        for (std::size_t s = 0; s < topo.n_services(); ++s)
        {
            // exponential draws normalize to a flat Dirichlet sample
            w(s, f) = -std::log(1.0 - rng.uniform01());
            sum += w(s, f);
        }
        for (std::size_t s = 0; s < topo.n_services(); ++s)
        {
            w(s, f) = sum > 0 ? w(s, f) / sum : 0.0;
        }
    }
    return w;
}

struct trace_options
{
    double traffic_period_s = 60;
    std::uint64_t split_seed = 1; ///< seeds the '*' split weights
};

inline trace_schedule parse_trace(std::istream& in, const topology& topo, const trace_options& opts = {})
{
    std::map<std::uint64_t, matrix<double>> by_interval;
    matrix<double> weights;
    std::string line;
    std::size_t line_no = 0;
    bool seen_record = false;

    auto fail = [&line_no](const std::string& what) {
        throw trace_error("line " + std::to_string(line_no) + ": " + what);
    };

    while (std::getline(in, line))
    {
        ++line_no;
        auto const body = trim(line);
        if (body.empty() || body.front() == '#')
        {
            continue;
        }
        auto const fields = split(body, ',');
        if (fields.size() != 4)
        {
            fail("expected 4 comma-separated fields, got " + std::to_string(fields.size()));
        }
        auto const interval = parse_uint(fields[0]);
        if (!interval)
        {
            if (!seen_record && trim(fields[0]) == "interval")
            {
                seen_record = true; // header
                continue;
            }
            fail("bad interval '" + std::string(trim(fields[0])) + "'");
        }
        seen_record = true;

        auto const fog_id = parse_uint(fields[1]);
        if (!fog_id) fail("bad fog_id '" + std::string(trim(fields[1])) + "'");
        if (*fog_id >= topo.n_fog()) fail("unknown fog node " + std::to_string(*fog_id));

        auto const rate = parse_double(fields[3]);
        if (!rate || !std::isfinite(*rate)) fail("bad rate '" + std::string(trim(fields[3])) + "'");
        if (*rate < 0) fail("negative rate");

        auto [it, fresh] = by_interval.try_emplace(*interval, topo.n_services(), topo.n_fog(), 0.0);
        auto& rates = it->second;

        auto const svc_field = trim(fields[2]);
        if (svc_field == "*")
        {
            if (weights.empty())
            {
                weights = service_split_weights(topo, opts.split_seed);
            }
            for (std::size_t s = 0; s < topo.n_services(); ++s)
            {
                rates(s, *fog_id) += *rate * weights(s, *fog_id);
            }
            continue;
        }
        auto const svc_id = parse_uint(svc_field);
        if (!svc_id) fail("bad service_id '" + std::string(svc_field) + "'");
        if (*svc_id >= topo.n_services()) fail("unknown service " + std::to_string(*svc_id));
        rates(*svc_id, *fog_id) += *rate;
    }

    if (by_interval.empty())
    {
        throw trace_error("no snapshots");
    }

    trace_schedule sched;
    sched.traffic_period_s = opts.traffic_period_s;
    for (auto& [interval, rates] : by_interval)
    {
        sched.snapshots.push_back({std::move(rates), static_cast<std::size_t>(interval)});
    }
    return sched;
}

/// Writes every entry, zeros included, so that empty snapshots survive.
inline void emit_trace(std::ostream& os, const trace_schedule& sched)
{
    os << "interval,fog_id,service_id,requests_per_sec\n";
    for (auto const& snap : sched.snapshots)
    {
        for (std::size_t f = 0; f < snap.rates.cols(); ++f)
        {
            for (std::size_t s = 0; s < snap.rates.rows(); ++s)
            {
                os << snap.interval << ',' << f << ',' << s << ',' << format_double(snap.rates(s, f)) << '\n';
            }
        }
    }
}

enum class traffic_profile
{
    constant,
    diurnal,
    spiky
};

inline traffic_profile parse_traffic_profile(std::string_view name)
{
    if (name == "constant") return traffic_profile::constant;
    if (name == "diurnal") return traffic_profile::diurnal;
    if (name == "spiky") return traffic_profile::spiky;
    throw std::invalid_argument("unknown traffic profile '" + std::string(name) + "'");
}

inline const char* to_string(traffic_profile p)
{
    switch (p)
    {
        case traffic_profile::constant: return "constant";
        case traffic_profile::diurnal: return "diurnal";
        case traffic_profile::spiky: return "spiky";
    }
    return "?";
}

/// Synthetic trace envelope.
///
/// Every (s,f) pair gets a fixed weight w drawn from U(1-h, 1+h) (h is the
/// heterogeneity); the rate at interval t is
///   constant: base * w
///   diurnal:  base * w * (1 + amplitude * sin(2 pi t / period))
///   spiky:    base * w, multiplied by spike_factor on seeded (t, f) bursts
/// and is finally clipped to [min_rate, max_rate].
struct synth_config
{
    traffic_profile profile = traffic_profile::diurnal;
    double base_rate = 1.0; ///< requests/s per (service, fog node)
    double heterogeneity = 0.0;
    double amplitude = 0.5;
    double period_intervals = 60;
    double spike_prob = 0.05;
    double spike_factor = 3.0;
    double min_rate = 0.0;
    double max_rate = std::numeric_limits<double>::infinity();
    double traffic_period_s = 60;
};

inline double diurnal_factor(double amplitude, double period_intervals, double t)
{
    return 1.0 + amplitude * std::sin(2.0 * std::numbers::pi * t / period_intervals);
}

inline trace_schedule synth_trace(const topology& topo, std::size_t n_intervals, std::uint64_t seed,
                                  const synth_config& cfg)
{
    if (n_intervals < 1)
    {
        throw std::invalid_argument("synth_trace: n_intervals must be >= 1");
    }
    if (cfg.min_rate > cfg.max_rate)
    {
        throw std::invalid_argument("synth_trace: min_rate > max_rate");
    }
    if (cfg.profile == traffic_profile::diurnal && !(cfg.period_intervals > 0))
    {
        throw std::invalid_argument("synth_trace: period must be > 0");
    }

    auto const n_s = topo.n_services();
    auto const n_f = topo.n_fog();

    matrix<double> weight(n_s, n_f, 1.0);
    if (cfg.heterogeneity > 0)
    {
        rng_stream wrng(derive_seed(seed, 1));
        for (auto& w : weight.data())
        {
            w = wrng.uniform(1.0 - cfg.heterogeneity, 1.0 + cfg.heterogeneity);
        }
    }
    rng_stream burst_rng(derive_seed(seed, 2));

    trace_schedule sched;
    sched.traffic_period_s = cfg.traffic_period_s;
    sched.snapshots.reserve(n_intervals);
    for (std::size_t t = 0; t < n_intervals; ++t)
    {
        traffic_snapshot snap = zero_snapshot(topo, t);
        double factor = 1.0;
        if (cfg.profile == traffic_profile::diurnal)
        {
            factor = diurnal_factor(cfg.amplitude, cfg.period_intervals, static_cast<double>(t));
        }
        for (std::size_t f = 0; f < n_f; ++f)
        {
            double node_factor = factor;
            if (cfg.profile == traffic_profile::spiky && burst_rng.bernoulli(cfg.spike_prob))
            {
                node_factor *= cfg.spike_factor;
            }
            for (std::size_t s = 0; s < n_s; ++s)
            {
                auto const r = cfg.base_rate * weight(s, f) * node_factor;
                snap.rates(s, f) = std::clamp(r, cfg.min_rate, cfg.max_rate);
            }
        }
        sched.snapshots.push_back(std::move(snap));
    }
    return sched;
}

} // namespace fogplace

#endif // FOGPLACE_TRAFFIC_HPP
