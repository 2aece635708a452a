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
 * \file fogplace/optimizer.hpp
 *
 * \brief Hybrid binary PSO / chemical-reaction optimizer (HBPCRO).
 *
 * A particle's position is the row-major flattening of the fog placement
 * matrix, dimension i = s * |F| + f. The swarm alternates between local
 * chemical-reaction steps on a randomly picked particle (on-wall and
 * inter-molecular collisions) and, whenever the picked particle has made
 * more than gamma accepted local steps, a global binary PSO sweep with a
 * spread-driven inertia weight and a V-shaped transfer function.
 *
 * The operators are templates over a binary_objective so they can be
 * exercised on toy problems; placement_objective binds them to the
 * fog-cloud cost model.
 */

#ifndef FOGPLACE_OPTIMIZER_HPP
#define FOGPLACE_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <fogplace/cost.hpp>
#include <fogplace/delay.hpp>
#include <fogplace/model.hpp>
#include <fogplace/random.hpp>
#include <fogplace/traffic.hpp>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace fogplace {

using bit_vector = std::vector<std::uint8_t>;

struct swarm_config
{
    std::size_t n_particles = 35;
    std::size_t max_iter = 700;
    std::size_t gamma = 3; ///< accepted local steps before a global sweep
    double init_ke = 100000;
    double v_min = -0.5;
    double v_max = 5.0;
    double min_ke_loss_per = 0.1;
    double inter_prob = 0.8;
    double alpha_i = 0.9;
    double alpha_f = 0.5;
    double beta_i = 0.5;
    double beta_f = 5.5;
    std::size_t collision_steps = 5; ///< swaps per collision
    double omega_floor = 0.1; ///< inertia used when the swarm has no spread
    bool invert_inter_prob = false; ///< inter-molecular when U(0,1) < inter_prob instead
    bool early_exit = true;
    std::uint64_t seed = 1;
};

inline void validate(const swarm_config& c)
{
    if (c.n_particles < 2) throw std::invalid_argument("n_particles must be >= 2");
    if (!(c.v_min < c.v_max)) throw std::invalid_argument("v_min must be < v_max");
    auto frac = [](double v, const char* name) {
        if (!(v >= 0 && v <= 1)) throw std::invalid_argument(std::string(name) + " must be in [0,1]");
    };
    frac(c.min_ke_loss_per, "min_ke_loss_per");
    frac(c.inter_prob, "inter_prob");
    if (!(c.init_ke >= 0)) throw std::invalid_argument("init_ke must be >= 0");
    if (!(c.omega_floor > 0)) throw std::invalid_argument("omega_floor must be > 0");
}

struct particle
{
    bit_vector position;
    std::vector<double> velocity;
    bit_vector pbest_position;
    double pbest_cost = std::numeric_limits<double>::infinity();
    double cost = std::numeric_limits<double>::infinity(); ///< potential energy of position
    double kinetic_energy = 0;
    std::size_t local_thresh = 0;
};

/// Cost function over bit vectors plus the feasibility hooks the operators
/// need. tracker(x) returns an object with fits(i), add(i) and remove(i)
/// that follows single-bit changes of x.
template <typename P>
concept binary_objective = requires(const P& p, const bit_vector& x, std::size_t i) {
    { p.dimension() } -> std::convertible_to<std::size_t>;
    { p.cost(x) } -> std::convertible_to<double>;
    { p.feasible(x) } -> std::convertible_to<bool>;
    { p.repair(x) } -> std::same_as<bit_vector>;
    { p.thresholds_met(x) } -> std::convertible_to<bool>;
    { p.tracker(x).fits(i) } -> std::convertible_to<bool>;
};

struct swarm
{
    std::vector<particle> particles;
    std::vector<rng_stream> streams; ///< one per particle
    bit_vector gbest_position;
    double gbest_cost = std::numeric_limits<double>::infinity();

    /// Refreshes the global best from the personal bests; returns true if
    /// it improved.
    bool update_gbest()
    {
        bool improved = false;
        for (auto const& p : particles)
        {
            if (p.pbest_cost < gbest_cost)
            {
                gbest_cost = p.pbest_cost;
                gbest_position = p.pbest_position;
                improved = true;
            }
        }
        return improved;
    }
};

inline void update_pbest(particle& p)
{
    if (p.cost < p.pbest_cost)
    {
        p.pbest_cost = p.cost;
        p.pbest_position = p.position;
    }
}

template <binary_objective Objective>
swarm init_swarm(const swarm_config& cfg, const Objective& obj)
{
    validate(cfg);
    auto const dim = obj.dimension();
    swarm sw;
    sw.particles.resize(cfg.n_particles);
    sw.streams.reserve(cfg.n_particles);
    for (std::size_t i = 0; i < cfg.n_particles; ++i)
    {
        sw.streams.emplace_back(derive_seed(cfg.seed, i + 1));
        auto& rng = sw.streams.back();
        auto& p = sw.particles[i];
        p.position.resize(dim);
        for (auto& b : p.position) b = static_cast<std::uint8_t>(rng.bernoulli(0.5));
        p.velocity.resize(dim);
        for (auto& v : p.velocity) v = rng.uniform(cfg.v_min, cfg.v_max);
        p.position = obj.repair(p.position);
        p.cost = obj.cost(p.position);
        p.pbest_position = p.position;
        p.pbest_cost = p.cost;
        p.kinetic_energy = cfg.init_ke;
        p.local_thresh = 0;
    }
    sw.update_gbest();
    return sw;
}

/// Inertia weight exp(-iteration / (spread * max_iter)) where spread is the
/// mean of the cost range across particles and the Euclidean distance from
/// the global best to the mean position.
inline double spread_inertia(const std::vector<particle>& particles, const bit_vector& gbest, std::size_t iteration,
                             std::size_t max_iter, double omega_floor)
{
    if (particles.empty() || max_iter == 0)
    {
        return 1.0;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (auto const& p : particles)
    {
        lo = std::min(lo, p.cost);
        hi = std::max(hi, p.cost);
    }
    auto const precision = hi - lo;

    auto const dim = gbest.size();
    double deviation = 0;
    for (std::size_t i = 0; i < dim; ++i)
    {
        double mean = 0;
        for (auto const& p : particles) mean += p.position[i];
        mean /= static_cast<double>(particles.size());
        auto const d = static_cast<double>(gbest[i]) - mean;
        deviation += d * d;
    }
    deviation = std::sqrt(deviation);

    auto const spread = (precision + deviation) / 2.0;
    if (!(spread > 1e-12) || !std::isfinite(spread))
    {
        return omega_floor;
    }
    return std::exp(-static_cast<double>(iteration) / (spread * static_cast<double>(max_iter)));
}

/// Linearly scheduled cognitive and social coefficients (alpha, beta).
inline std::pair<double, double> scheduled_coefficients(const swarm_config& cfg, std::size_t iteration)
{
    if (cfg.max_iter == 0)
    {
        return {cfg.alpha_i, cfg.beta_i};
    }
    auto const frac = static_cast<double>(iteration) / static_cast<double>(cfg.max_iter);
    return {(cfg.alpha_f - cfg.alpha_i) * frac + cfg.alpha_i, (cfg.beta_f - cfg.beta_i) * frac + cfg.beta_i};
}

inline double clip_velocity(double v, double v_min, double v_max)
{
    return std::clamp(v, v_min, v_max);
}

/// V' = w V + a r1 (pbest - X) + b r2 (gbest - X), clipped; r1 then r2 are
/// drawn per dimension.
inline void update_velocity(particle& p, const bit_vector& gbest, double omega, double alpha, double beta,
                            rng_stream& rng, double v_min, double v_max)
{
    for (std::size_t i = 0; i < p.velocity.size(); ++i)
    {
        auto const r1 = rng.uniform01();
        auto const r2 = rng.uniform01();
        auto const x = static_cast<double>(p.position[i]);
        auto const v = omega * p.velocity[i] + alpha * r1 * (static_cast<double>(p.pbest_position[i]) - x)
                       + beta * r2 * (static_cast<double>(gbest[i]) - x);
        p.velocity[i] = clip_velocity(v, v_min, v_max);
    }
}

inline double sigmoid(double z)
{
    return 1.0 / (1.0 + std::exp(-z));
}

/// V-shaped transfer: probability that a dimension takes the side its
/// velocity points to.
inline double flip_probability(double v)
{
    return std::abs(2.0 * (sigmoid(v) - 0.5));
}

enum class bit_move
{
    keep,
    deploy,
    release
};

/// Decision for one dimension given velocity v and uniform draw u.
inline bit_move transfer_decision(double v, double u)
{
    if (flip_probability(v) < u)
    {
        return bit_move::keep;
    }
    return v > 0 ? bit_move::deploy : bit_move::release;
}

/// Moves a particle according to its velocity. Deployments only happen
/// when the target node has room; the result is repaired.
template <binary_objective Objective>
void update_position(particle& p, rng_stream& rng, const Objective& obj)
{
    auto tr = obj.tracker(p.position);
    for (std::size_t i = 0; i < p.position.size(); ++i)
    {
        // u in (0, 1] so that a zero velocity never moves
        auto const u = 1.0 - rng.uniform01();
        switch (transfer_decision(p.velocity[i], u))
        {
            case bit_move::keep: break;
            case bit_move::deploy:
                if (!p.position[i] && tr.fits(i))
                {
                    p.position[i] = 1;
                    tr.add(i);
                }
                break;
            case bit_move::release:
                if (p.position[i])
                {
                    p.position[i] = 0;
                    tr.remove(i);
                }
                break;
        }
    }
    if (!obj.feasible(p.position))
    {
        p.position = obj.repair(p.position);
    }
}

/// Alg. on-wall collision: a few random swaps of the particle's own bits,
/// accepted only if the potential energy (cost) drops. Returns acceptance.
template <binary_objective Objective>
bool on_wall_collision(particle& p, rng_stream& rng, const Objective& obj, const swarm_config& cfg)
{
    auto const dim = p.position.size();
    if (dim == 0) return false;

    bit_vector x = p.position;
    for (std::size_t step = 0; step < cfg.collision_steps; ++step)
    {
        auto const i = rng.index(dim);
        auto const j = rng.index(dim);
        std::swap(x[i], x[j]);
        if (!obj.feasible(x))
        {
            x = obj.repair(x);
        }
    }
    auto const pe = obj.cost(x);
    if (!(pe < p.cost))
    {
        return false;
    }
    auto const q = rng.uniform(cfg.min_ke_loss_per, 1.0);
    p.kinetic_energy = q * (p.cost + p.kinetic_energy - pe);
    p.position = std::move(x);
    p.cost = pe;
    update_pbest(p);
    ++p.local_thresh;
    return true;
}

/// Inter-molecular collision: each new particle exchanges random elements
/// with working copies of both old particles; a step that breaks a
/// constraint is reverted. Accepted only if the joint cost drops, in which
/// case the lost energy is split q : (1 - q) between the two.
template <binary_objective Objective>
bool inter_molecular_collision(particle& p1, particle& p2, rng_stream& rng, const Objective& obj,
                               const swarm_config& cfg)
{
    if (&p1 == &p2)
    {
        throw std::invalid_argument("inter_molecular_collision needs two distinct particles");
    }
    auto const dim = p1.position.size();
    if (dim == 0) return false;

    bit_vector n1 = p1.position;
    bit_vector n2 = p2.position;
    bit_vector old1 = p1.position;
    bit_vector old2 = p2.position;

    auto cross = [&](bit_vector& child) {
        for (std::size_t step = 0; step < cfg.collision_steps; ++step)
        {
            auto const i = rng.index(dim);
            auto const j = rng.index(dim);
            std::swap(child[i], old1[i]);
            std::swap(child[j], old2[j]);
            if (!obj.feasible(child))
            {
                std::swap(child[j], old2[j]);
                std::swap(child[i], old1[i]);
            }
        }
    };
    cross(n1);
    cross(n2);

    auto const pe1 = obj.cost(n1);
    auto const pe2 = obj.cost(n2);
    if (!(pe1 + pe2 < p1.cost + p2.cost))
    {
        return false;
    }
    auto const lost = p1.cost + p2.cost + p1.kinetic_energy + p2.kinetic_energy - pe1 - pe2;
    auto const q = rng.uniform01();
    p1.kinetic_energy = q * lost;
    p2.kinetic_energy = lost - p1.kinetic_energy;

    p1.position = std::move(n1);
    p1.cost = pe1;
    p2.position = std::move(n2);
    p2.cost = pe2;
    update_pbest(p1);
    update_pbest(p2);
    ++p1.local_thresh;
    ++p2.local_thresh;
    return true;
}

/// One global binary PSO step of every particle, each with its own stream.
template <binary_objective Objective>
void pso_sweep(swarm& sw, std::size_t iteration, const swarm_config& cfg, const Objective& obj)
{
    auto const omega = spread_inertia(sw.particles, sw.gbest_position, iteration, cfg.max_iter, cfg.omega_floor);
    auto const [alpha, beta] = scheduled_coefficients(cfg, iteration);
    auto const gbest = sw.gbest_position;
    for (std::size_t i = 0; i < sw.particles.size(); ++i)
    {
        auto& p = sw.particles[i];
        auto& rng = sw.streams[i];
        update_velocity(p, gbest, omega, alpha, beta, rng, cfg.v_min, cfg.v_max);
        update_position(p, rng, obj);
        p.cost = obj.cost(p.position);
        update_pbest(p);
    }
    sw.update_gbest();
}

enum class search_mode
{
    hybrid, ///< HBPCRO
    pso_only ///< every iteration is a global sweep
};

struct solve_stats
{
    std::size_t iterations = 0;
    std::size_t sweeps = 0;
    std::size_t wall_collisions = 0;
    std::size_t inter_collisions = 0;
    std::size_t accepted = 0;
    bool early_exit = false;
    std::vector<double> gbest_trace; ///< global best cost after each iteration
};

struct solve_result
{
    bit_vector position;
    double cost = std::numeric_limits<double>::infinity();
    solve_stats stats;
};

template <binary_objective Objective>
solve_result optimize(const swarm_config& cfg, const Objective& obj, search_mode mode = search_mode::hybrid)
{
    auto sw = init_swarm(cfg, obj);
    rng_stream sched(derive_seed(cfg.seed, 0));
    solve_result out;
    auto& st = out.stats;
    auto const n = sw.particles.size();

    bool met = cfg.early_exit && obj.thresholds_met(sw.gbest_position);
    for (std::size_t it = 0; it < cfg.max_iter && !met; ++it)
    {
        std::size_t touched[2] = {n, n};
        if (mode == search_mode::pso_only)
        {
            pso_sweep(sw, it, cfg, obj);
            ++st.sweeps;
        }
        else
        {
            auto const pick = sched.index(n);
            auto& p = sw.particles[pick];
            if (p.local_thresh > cfg.gamma)
            {
                pso_sweep(sw, it, cfg, obj);
                p.local_thresh = 0;
                ++st.sweeps;
            }
            else
            {
                auto const u = sched.uniform01();
                auto const inter = cfg.invert_inter_prob ? u < cfg.inter_prob : cfg.inter_prob < u;
                if (inter)
                {
                    auto other = sched.index(n - 1);
                    if (other >= pick) ++other;
                    st.accepted += inter_molecular_collision(p, sw.particles[other], sw.streams[pick], obj, cfg);
                    ++st.inter_collisions;
                    touched[0] = pick;
                    touched[1] = other;
                }
                else
                {
                    st.accepted += on_wall_collision(p, sw.streams[pick], obj, cfg);
                    ++st.wall_collisions;
                    touched[0] = pick;
                }
            }
        }

        // Position consistency: local steps must leave feasible particles.
        for (auto t : touched)
        {
            if (t >= n) continue;
            auto& p = sw.particles[t];
            if (!obj.feasible(p.position))
            {
                p.position = obj.repair(p.position);
                p.cost = obj.cost(p.position);
                update_pbest(p);
            }
        }

        if (sw.update_gbest() && cfg.early_exit)
        {
            met = obj.thresholds_met(sw.gbest_position);
        }
        st.gbest_trace.push_back(sw.gbest_cost);
        st.iterations = it + 1;
    }
    st.early_exit = met;
    out.position = sw.gbest_position;
    out.cost = sw.gbest_cost;
    return out;
}

// ---------------------------------------------------------------------------
// Fog-cloud placement objective
// ---------------------------------------------------------------------------

/// Binds the optimizer to one reconfiguration: topology, current traffic
/// and the placement in force before it. Cloud placement is always derived
/// from the fog bits by the release rule, so positions only encode P.
///
/// feasible() covers the fog-side capacity constraints the operators can
/// break; cloud-side breaches follow from routing and are priced by
/// total_cost().
class placement_objective
{
public:
    placement_objective(const topology& topo, const traffic_snapshot& snap, const placement_state& prev,
                        const cost_rates& rates, const delay_params& dparams)
    : topo_(&topo), snap_(&snap), prev_(&prev), rates_(rates), dparams_(dparams)
    {
    }

    std::size_t dimension() const noexcept { return topo_->dimension(); }

    placement_state decode(const bit_vector& x) const
    {
        auto p = new_placement(*topo_);
        p.fog.data() = x;
        p.timestamp = snap_->interval;
        route_to_cloud(p, *snap_, *topo_);
        return p;
    }

    double cost(const bit_vector& x) const
    {
        return total_cost(decode(x), *prev_, *snap_, *topo_, rates_, dparams_).total;
    }

    bool feasible(const bit_vector& x) const
    {
        auto p = new_placement(*topo_);
        p.fog.data() = x;
        fog_usage usage(p, *snap_, *topo_);
        for (std::size_t f = 0; f < topo_->n_fog(); ++f)
        {
            if (!usage.feasible(f)) return false;
        }
        return true;
    }

    bit_vector repair(const bit_vector& x) const
    {
        auto p = new_placement(*topo_);
        p.fog.data() = x;
        return best_fit_repair(std::move(p), *topo_, *snap_).fog.data();
    }

    /// Every requested pair meets its violation budget and mean threshold.
    bool thresholds_met(const bit_vector& x) const
    {
        auto const p = decode(x);
        auto const load = compute_load(p, *snap_, *topo_);
        auto const rep = compute_delays(p, *snap_, load, *topo_, dparams_);
        for (std::size_t s = 0; s < topo_->n_services(); ++s)
        {
            auto const& svc = topo_->services[s];
            for (std::size_t f = 0; f < topo_->n_fog(); ++f)
            {
                if (!(snap_->rates(s, f) > 0)) continue;
                if (rep.violation_prob(s, f) > 1.0 - svc.qos_level) return false;
                if (rep.service_delay_ms(s, f) > svc.delay_threshold) return false;
            }
        }
        return true;
    }

    class bit_tracker
    {
    public:
        bit_tracker(const placement_objective& obj, const bit_vector& x)
        : n_fog_(obj.topo_->n_fog()), n_s_(obj.topo_->n_services()), p_(new_placement(*obj.topo_)),
          usage_((p_.fog.data() = x, p_), *obj.snap_, *obj.topo_)
        {
        }

        bool fits(std::size_t i) const
        {
            auto const [s, f] = unflatten_index(i, n_fog_, n_s_);
            return usage_.fits(s, f);
        }

        void add(std::size_t i)
        {
            auto const [s, f] = unflatten_index(i, n_fog_, n_s_);
            p_.fog(s, f) = 1;
            usage_.add(s, f);
        }

        void remove(std::size_t i)
        {
            auto const [s, f] = unflatten_index(i, n_fog_, n_s_);
            p_.fog(s, f) = 0;
            usage_.remove(s, f, p_);
        }

    private:
        std::size_t n_fog_;
        std::size_t n_s_;
        placement_state p_;
        fog_usage usage_;
    };

    bit_tracker tracker(const bit_vector& x) const { return bit_tracker(*this, x); }

    const topology& topo() const noexcept { return *topo_; }
    const traffic_snapshot& snapshot() const noexcept { return *snap_; }
    const placement_state& previous() const noexcept { return *prev_; }
    const cost_rates& rates() const noexcept { return rates_; }
    const delay_params& delays() const noexcept { return dparams_; }

private:
    const topology* topo_;
    const traffic_snapshot* snap_;
    const placement_state* prev_;
    cost_rates rates_;
    delay_params dparams_;
};

static_assert(binary_objective<placement_objective>);

struct placement_solution
{
    placement_state placement;
    double cost = 0;
    solve_stats stats;
};

/// Runs the optimizer for one reconfiguration and maps the global best
/// back to P and Q.
inline placement_solution solve(const swarm_config& cfg, const topology& topo, const traffic_snapshot& snap,
                                const placement_state& prev, const cost_rates& rates, const delay_params& dparams,
                                search_mode mode = search_mode::hybrid)
{
    placement_objective obj(topo, snap, prev, rates, dparams);
    auto res = optimize(cfg, obj, mode);
    return {obj.decode(res.position), res.cost, std::move(res.stats)};
}

} // namespace fogplace

#endif // FOGPLACE_OPTIMIZER_HPP
