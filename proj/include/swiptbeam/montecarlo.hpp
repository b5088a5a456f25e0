#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "model.hpp"
#include "rng.hpp"
#include "solver.hpp"
#include "worstcase.hpp"

// Monte Carlo campaign over random channels: at every (rate target, epsilon)
// cell the robust design is compared against the nominal design that ignores
// channel errors, under a shared set of sampled perturbations plus each
// design's closed-form worst case. Channels are drawn once per campaign and
// reused across cells; every trial owns a substream keyed on (cell, channel),
// so reports are byte-identical for any worker count.

namespace swiptbeam {

struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string f, const std::string& msg)
        : std::runtime_error(msg), field(std::move(f)) {}
};

struct SimConfig {
    int n_antennas = 4;
    double power = 10.0;
    double sigma2 = 1.0;
    std::vector<double> epsilons;    // empty: sweep defaults apply
    std::vector<double> rate_grid;   // empty: sweep defaults apply
    int n_channels = 100;
    int n_error_samples = 100;
    std::uint64_t seed = 0;
    double channel_norm = 0.0;       // squared channel norm; 0 resolves to n_antennas
    int threads = 0;                 // worker count; 0 resolves to the hardware count
};

inline double resolved_channel_norm(const SimConfig& c) {
    return c.channel_norm > 0.0 ? c.channel_norm : static_cast<double>(c.n_antennas);
}

inline unsigned resolved_threads(const SimConfig& c) {
    if (c.threads > 0) return static_cast<unsigned>(c.threads);
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Largest rate any design can promise on a norm-||h||^2 channel.
inline double rate_cap(const SimConfig& c) {
    return std::log2(1.0 + c.power * resolved_channel_norm(c) / c.sigma2);
}

inline void validate_config(const SimConfig& c) {
    if (c.n_antennas < 1) throw ConfigError("n_antennas", "n_antennas must be at least 1");
    if (!(c.power > 0.0)) throw ConfigError("power", "power must be positive");
    if (!(c.sigma2 > 0.0)) throw ConfigError("sigma2", "sigma2 must be positive");
    if (c.n_channels < 1) throw ConfigError("n_channels", "n_channels must be at least 1");
    if (c.n_error_samples < 1)
        throw ConfigError("n_error_samples", "n_error_samples must be at least 1");
    if (c.channel_norm < 0.0)
        throw ConfigError("channel_norm", "channel_norm must be nonnegative");
    if (c.threads < 0) throw ConfigError("threads", "threads must be nonnegative");
    if (c.epsilons.empty()) throw ConfigError("epsilons", "at least one epsilon is required");
    for (double e : c.epsilons) {
        if (!(e >= 0.0) || !std::isfinite(e))
            throw ConfigError("epsilons", "epsilon values must be finite and nonnegative");
    }
    if (c.rate_grid.empty()) throw ConfigError("rate_grid", "at least one rate target is required");
    const double cap = rate_cap(c);
    for (double r : c.rate_grid) {
        if (!(r >= 0.0) || !std::isfinite(r))
            throw ConfigError("rate_grid", "rate targets must be finite and nonnegative");
        if (r >= cap)
            throw ConfigError("rate_grid",
                              "rate target exceeds log2(1 + P * ||h||^2 / sigma2) = " +
                                  std::to_string(cap));
    }
}

// Twelve evenly spaced targets from zero to 95% of the rate cap.
inline std::vector<double> default_rate_grid(const SimConfig& c) {
    const double top = 0.95 * rate_cap(c);
    std::vector<double> grid(12);
    for (int i = 0; i < 12; ++i) grid[i] = top * i / 11.0;
    return grid;
}

// Random direction, deterministic length: the squared norm is pinned exactly
// to norm2 so feasibility depends on the cell, never on the draw.
inline ChannelVector gen_rayleigh_channel(std::size_t n, double norm2, RandomStream& rng) {
    if (n == 0) throw std::invalid_argument("gen_rayleigh_channel: empty dimension");
    if (norm2 < 0.0) throw std::invalid_argument("gen_rayleigh_channel: negative norm");
    ChannelVector h(n);
    double sq = 0.0;
    do {
        sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            h[i] = rng.normal_complex();
            sq += std::norm(h[i]);
        }
    } while (sq == 0.0 && norm2 > 0.0);
    const double scale = norm2 > 0.0 ? std::sqrt(norm2 / sq) : 0.0;
    for (auto& z : h) z *= scale;
    return h;
}

struct TrialResult {
    bool robust_feasible = false;
    double guaranteed_energy = 0.0;
    double nominal_energy = 0.0;
    double empirical_min_energy = 0.0;
    double empirical_min_rate = 0.0;
    bool robust_outage = false;
    bool nonrobust_outage = false;
    std::string error;  // nonempty when a solver failed; the trial is then skipped
};

// One channel draw at one grid cell. The nominal design solves the same
// instance with epsilon forced to zero (always feasible under the validated
// rate cap); the robust design may be infeasible, which the result records
// rather than treats as an error. Both designs face the same interior draws,
// and each additionally faces its own closed-form worst perturbation.
inline TrialResult run_trial(const SimConfig& cfg, double rate_target, double epsilon,
                             const ChannelVector& h_hat, const ChannelVector& g_hat,
                             RandomStream rng) {
    TrialResult t;
    const RobustInstance inst{h_hat, g_hat, cfg.power, cfg.sigma2, rate_target, epsilon};

    t.robust_feasible = check_feasibility(inst).feasible;
    Beamformer w_rob, w_nom;
    try {
        w_nom = solve_nonrobust(inst).w;
        if (t.robust_feasible) {
            const BeamformerSolution sol = solve_dual_sdp(inst);
            t.guaranteed_energy = sol.guaranteed_energy;
            t.nominal_energy = sol.nominal_energy;
            w_rob = sol.w;
        }
    } catch (const std::exception& ex) {
        t.error = ex.what();
        return t;
    }

    const std::size_t n = inst.dim();
    const double inf = std::numeric_limits<double>::infinity();
    double rob_min_energy = inf, rob_min_rate = inf, nom_min_rate = inf;

    std::complex<double> rob_h{}, rob_g{}, nom_h{};
    const auto rate_of = [&](std::complex<double> amp) {
        return std::log2(1.0 + std::norm(amp) / cfg.sigma2);
    };
    if (t.robust_feasible) {
        rob_h = detail::dot(h_hat, w_rob);
        rob_g = detail::dot(g_hat, w_rob);
        const ErrorVector worst_g = worst_error_vector(g_hat, epsilon, w_rob);
        const ErrorVector worst_h = worst_error_vector(h_hat, epsilon, w_rob);
        rob_min_energy = std::norm(rob_g + detail::dot(worst_g.delta, w_rob));
        rob_min_rate = rate_of(rob_h + detail::dot(worst_h.delta, w_rob));
    }
    nom_h = detail::dot(h_hat, w_nom);
    nom_min_rate = rate_of(nom_h + detail::dot(worst_error_vector(h_hat, epsilon, w_nom).delta, w_nom));

    for (int i = 0; i < cfg.n_error_samples; ++i) {
        const ErrorVector dh = sample_ball(epsilon, n, BallMode::interior, rng);
        const ErrorVector dg = sample_ball(epsilon, n, BallMode::interior, rng);
        if (t.robust_feasible) {
            rob_min_energy = std::min(rob_min_energy, std::norm(rob_g + detail::dot(dg.delta, w_rob)));
            rob_min_rate = std::min(rob_min_rate, rate_of(rob_h + detail::dot(dh.delta, w_rob)));
        }
        nom_min_rate = std::min(nom_min_rate, rate_of(nom_h + detail::dot(dh.delta, w_nom)));
    }

    if (t.robust_feasible) {
        t.empirical_min_energy = kConversionEfficiency * rob_min_energy;
        t.empirical_min_rate = rob_min_rate;
        t.robust_outage = rob_min_rate < rate_target - kOutageTol;
    }
    t.nonrobust_outage = nom_min_rate < rate_target - kOutageTol;
    return t;
}

struct SimRow {
    double rate_target = 0.0;
    double epsilon = 0.0;
    int n_feasible = 0;  // robust-feasible trials; averages run over these only
    double avg_guaranteed_energy = 0.0;
    double avg_empirical_min_energy = 0.0;
    double avg_nominal_energy = 0.0;
    double robust_outage_pct = 0.0;
    double nonrobust_outage_pct = 0.0;
};

struct SimReport {
    std::vector<SimRow> rows;  // rate-major: all epsilons for the first rate, then the next
    std::vector<std::string> errors;
    std::uint64_t seed = 0;
    int n_channels = 0;
    int n_error_samples = 0;
};

namespace detail {

inline constexpr std::uint64_t kChannelStream = 1;
inline constexpr std::uint64_t kTrialStream = 2;

template <typename Fn>
inline void parallel_for_index(std::size_t count, unsigned threads, Fn&& fn) {
    if (count == 0) return;
    threads = static_cast<unsigned>(
        std::min<std::size_t>(std::max(1u, threads), count));
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace detail

inline SimReport run_campaign(const SimConfig& cfg) {
    validate_config(cfg);
    const RandomStream root(cfg.seed);
    const double norm2 = resolved_channel_norm(cfg);
    const std::size_t n = static_cast<std::size_t>(cfg.n_antennas);
    const std::size_t n_channels = static_cast<std::size_t>(cfg.n_channels);

    std::vector<ChannelVector> hs(n_channels), gs(n_channels);
    for (std::size_t c = 0; c < n_channels; ++c) {
        RandomStream s = root.derive(detail::kChannelStream, c);
        hs[c] = gen_rayleigh_channel(n, norm2, s);
        gs[c] = gen_rayleigh_channel(n, norm2, s);
    }

    const std::size_t n_eps = cfg.epsilons.size();
    const std::size_t n_cells = cfg.rate_grid.size() * n_eps;
    const std::size_t n_trials = n_cells * n_channels;
    std::vector<TrialResult> trials(n_trials);
    detail::parallel_for_index(n_trials, resolved_threads(cfg), [&](std::size_t idx) {
        const std::size_t cell = idx / n_channels;
        const std::size_t ch = idx % n_channels;
        const double r = cfg.rate_grid[cell / n_eps];
        const double eps = cfg.epsilons[cell % n_eps];
        try {
            trials[idx] =
                run_trial(cfg, r, eps, hs[ch], gs[ch], root.derive(detail::kTrialStream, cell, ch));
        } catch (const std::exception& ex) {
            trials[idx] = TrialResult{};
            trials[idx].error = ex.what();
        }
    });

    SimReport rep;
    rep.seed = cfg.seed;
    rep.n_channels = cfg.n_channels;
    rep.n_error_samples = cfg.n_error_samples;
    rep.rows.reserve(n_cells);
    for (std::size_t cell = 0; cell < n_cells; ++cell) {
        SimRow row;
        row.rate_target = cfg.rate_grid[cell / n_eps];
        row.epsilon = cfg.epsilons[cell % n_eps];
        int feas = 0, valid = 0, rob_outages = 0, nom_outages = 0;
        double sum_guar = 0.0, sum_emp = 0.0, sum_nom = 0.0;
        for (std::size_t ch = 0; ch < n_channels; ++ch) {
            const TrialResult& t = trials[cell * n_channels + ch];
            if (!t.error.empty()) {
                rep.errors.push_back("r=" + std::to_string(row.rate_target) +
                                     " eps=" + std::to_string(row.epsilon) + " channel " +
                                     std::to_string(ch) + ": " + t.error);
                continue;
            }
            ++valid;
            if (t.nonrobust_outage) ++nom_outages;
            if (t.robust_feasible) {
                ++feas;
                sum_guar += t.guaranteed_energy;
                sum_emp += t.empirical_min_energy;
                sum_nom += t.nominal_energy;
                if (t.robust_outage) ++rob_outages;
            }
        }
        row.n_feasible = feas;
        if (feas > 0) {
            row.avg_guaranteed_energy = sum_guar / feas;
            row.avg_empirical_min_energy = sum_emp / feas;
            row.avg_nominal_energy = sum_nom / feas;
            row.robust_outage_pct = 100.0 * rob_outages / feas;
        }
        if (valid > 0) row.nonrobust_outage_pct = 100.0 * nom_outages / valid;
        rep.rows.push_back(row);
    }
    return rep;
}

// Guaranteed-energy-versus-rate sweep; fills in the standard epsilon set
// {0, 0.1, 0.3, 0.5} and the default rate grid when the config leaves them
// empty.
inline SimReport energy_sweep(SimConfig cfg) {
    if (cfg.epsilons.empty()) cfg.epsilons = {0.0, 0.1, 0.3, 0.5};
    if (cfg.rate_grid.empty()) cfg.rate_grid = default_rate_grid(cfg);
    return run_campaign(cfg);
}

// Outage-versus-rate sweep; defaults to the nonzero epsilon set {0.1, 0.3, 0.5}.
inline SimReport outage_sweep(SimConfig cfg) {
    if (cfg.epsilons.empty()) cfg.epsilons = {0.1, 0.3, 0.5};
    if (cfg.rate_grid.empty()) cfg.rate_grid = default_rate_grid(cfg);
    return run_campaign(cfg);
}

}  // namespace swiptbeam
