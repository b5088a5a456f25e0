#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>

#include "model.hpp"
#include "rng.hpp"

namespace swiptbeam {

// Channel perturbation together with the ball radius it was drawn from.
struct ErrorVector {
    ChannelVector delta;
    double radius_bound = 0.0;
};

enum class BallMode { boundary, interior };

// min over ||dv|| <= epsilon of |(v_hat + dv)^H w|.
//
// The adversary's best move is a step of length epsilon along -w, phase
// rotated to subtract amplitude directly, which leaves |v_hat^H w| -
// epsilon*||w||. Once the ball is large enough to null the inner product the
// minimum clamps at zero (a shorter step inside the ball reaches it), so the
// expression is exact for every epsilon, not just small ones.
inline double worst_case_amplitude(ComplexSpan v_hat, double epsilon, ComplexSpan w) {
    if (epsilon < 0.0) throw std::invalid_argument("worst_case_amplitude: negative epsilon");
    const double w_norm = detail::norm(w);
    if (w_norm == 0.0) throw std::invalid_argument("worst_case_amplitude: zero beamformer");
    const double amp = std::abs(detail::dot(v_hat, w)) - epsilon * w_norm;
    return amp > 0.0 ? amp : 0.0;
}

// Guaranteed harvested energy: the square of the worst-case amplitude of
// g_hat against w, times the conversion efficiency.
inline double worst_case_energy(ComplexSpan g_hat, double epsilon, ComplexSpan w) {
    const double amp = worst_case_amplitude(g_hat, epsilon, w);
    return kConversionEfficiency * amp * amp;
}

// Perturbation attaining worst_case_amplitude: dv = -(step/||w||) e^{-j theta} w
// with theta the phase of v_hat^H w and step = min(epsilon, |v_hat^H w|/||w||).
// The second branch is the interior minimiser that nulls the inner product.
inline ErrorVector worst_error_vector(ComplexSpan v_hat, double epsilon, ComplexSpan w) {
    if (epsilon < 0.0) throw std::invalid_argument("worst_error_vector: negative epsilon");
    const double w_norm = detail::norm(w);
    if (w_norm == 0.0) throw std::invalid_argument("worst_error_vector: zero beamformer");
    const std::complex<double> ip = detail::dot(v_hat, w);
    const double mag = std::abs(ip);
    const double step = std::min(epsilon, mag / w_norm);
    const std::complex<double> phase = mag > 0.0 ? std::conj(ip) / mag : std::complex<double>{1.0, 0.0};
    ErrorVector out;
    out.radius_bound = epsilon;
    out.delta.resize(w.size());
    const std::complex<double> coeff = -(step / w_norm) * phase;
    for (std::size_t i = 0; i < w.size(); ++i) out.delta[i] = coeff * w[i];
    return out;
}

// Uniform draw from the complex radius-epsilon ball in C^n. Boundary mode
// pins ||delta|| = epsilon; interior mode is uniform over the solid ball,
// i.e. radius epsilon * u^(1/(2n)) in 2n real dimensions.
inline ErrorVector sample_ball(double epsilon, std::size_t n, BallMode mode, RandomStream& rng) {
    if (epsilon < 0.0) throw std::invalid_argument("sample_ball: negative epsilon");
    if (n == 0) throw std::invalid_argument("sample_ball: empty dimension");
    ErrorVector out;
    out.radius_bound = epsilon;
    out.delta.assign(n, {0.0, 0.0});
    if (epsilon == 0.0) return out;
    double sq = 0.0;
    do {
        sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out.delta[i] = rng.normal_complex();
            sq += std::norm(out.delta[i]);
        }
    } while (sq == 0.0);
    double radius = epsilon;
    if (mode == BallMode::interior) {
        radius *= std::pow(rng.uniform01(), 1.0 / static_cast<double>(2 * n));
    }
    const double scale = radius / std::sqrt(sq);
    for (auto& z : out.delta) z *= scale;
    return out;
}

struct AdversaryReport {
    std::int64_t n_samples = 0;
    double min_energy = 0.0;
    double min_rate = 0.0;
    double closed_form_energy = 0.0;
    double closed_form_rate_power = 0.0;
    bool rate_outage = false;
    bool energy_bound_violated = false;
};

// Outage slack: empirical rates this far below the target are still treated
// as meeting it, and sampled energies this far below the closed-form bound
// do not count as violations.
inline constexpr double kOutageTol = 1e-9;

// Stress a fixed beamformer against the error ball: random perturbations
// (alternating interior and boundary draws) plus the closed-form worst
// vectors for both channels. Energies are tracked over the g perturbations,
// rates over the h perturbations.
inline AdversaryReport adversarial_check(const RobustInstance& inst, ComplexSpan w,
                                         std::int64_t n_samples, RandomStream& rng) {
    if (w.size() != inst.dim()) throw DimensionMismatch("adversarial_check: beamformer length");
    if (n_samples < 0) throw std::invalid_argument("adversarial_check: negative sample count");
    const std::size_t n = inst.dim();

    AdversaryReport rep;
    rep.n_samples = n_samples;
    rep.closed_form_energy = worst_case_energy(inst.g_hat, inst.epsilon, w);
    const double rate_amp = worst_case_amplitude(inst.h_hat, inst.epsilon, w);
    rep.closed_form_rate_power = rate_amp * rate_amp;

    const std::complex<double> base_g = detail::dot(inst.g_hat, w);
    const std::complex<double> base_h = detail::dot(inst.h_hat, w);
    const auto energy_at = [&](const ChannelVector& dg) {
        return kConversionEfficiency * std::norm(base_g + detail::dot(dg, w));
    };
    const auto rate_at = [&](const ChannelVector& dh) {
        return std::log2(1.0 + std::norm(base_h + detail::dot(dh, w)) / inst.sigma2);
    };

    rep.min_energy = energy_at(worst_error_vector(inst.g_hat, inst.epsilon, w).delta);
    rep.min_rate = rate_at(worst_error_vector(inst.h_hat, inst.epsilon, w).delta);

    for (std::int64_t i = 0; i < n_samples; ++i) {
        const BallMode mode = (i % 2 == 0) ? BallMode::interior : BallMode::boundary;
        const ErrorVector dg = sample_ball(inst.epsilon, n, mode, rng);
        const ErrorVector dh = sample_ball(inst.epsilon, n, mode, rng);
        rep.min_energy = std::min(rep.min_energy, energy_at(dg.delta));
        rep.min_rate = std::min(rep.min_rate, rate_at(dh.delta));
    }

    rep.rate_outage = rep.min_rate < inst.rate_target - kOutageTol;
    rep.energy_bound_violated = rep.min_energy < rep.closed_form_energy - kOutageTol;
    return rep;
}

}  // namespace swiptbeam
