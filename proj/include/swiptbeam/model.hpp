#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace swiptbeam {

using ChannelVector = std::vector<std::complex<double>>;
using Beamformer = std::vector<std::complex<double>>;
using ComplexSpan = std::span<const std::complex<double>>;

// RF-to-DC conversion efficiency at the energy receiver. Fixed to one, so
// harvested energy equals the received signal power.
inline constexpr double kConversionEfficiency = 1.0;

// Feasibility margins this close to zero (in sqrt-power units) still count
// as feasible; keeps boundary instances from flapping between solvers.
inline constexpr double kFeasibilityTol = 1e-12;

struct DimensionMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One robust design problem: estimated channels to the information receiver
// (h_hat) and the energy receiver (g_hat), a transmit power budget, receiver
// noise variance, a rate the information link must sustain, and the radius
// of the norm ball the true channel errors live in.
struct RobustInstance {
    ChannelVector h_hat;
    ChannelVector g_hat;
    double power = 0.0;
    double sigma2 = 1.0;
    double rate_target = 0.0;
    double epsilon = 0.0;

    std::size_t dim() const { return h_hat.size(); }
};

namespace detail {

// a^H b
inline std::complex<double> dot(ComplexSpan a, ComplexSpan b) {
    if (a.size() != b.size()) throw DimensionMismatch("inner product: length mismatch");
    std::complex<double> acc{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) acc += std::conj(a[i]) * b[i];
    return acc;
}

inline double squared_norm(ComplexSpan a) {
    double acc = 0.0;
    for (const auto& z : a) acc += std::norm(z);
    return acc;
}

inline double norm(ComplexSpan a) { return std::sqrt(squared_norm(a)); }

inline bool all_finite(ComplexSpan a) {
    for (const auto& z : a) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

}  // namespace detail

// Minimum signal power needed at the information receiver for rate r:
// sigma2 * (2^r - 1).
inline double rate_threshold(double rate_target, double sigma2) {
    if (rate_target < 0.0) throw std::invalid_argument("rate_threshold: negative rate");
    if (sigma2 <= 0.0) throw std::invalid_argument("rate_threshold: sigma2 must be positive");
    return sigma2 * (std::exp2(rate_target) - 1.0);
}

// |g^H w|^2 scaled by the conversion efficiency.
inline double harvested_energy(ComplexSpan g, ComplexSpan w) {
    return kConversionEfficiency * std::norm(detail::dot(g, w));
}

// log2(1 + |h^H w|^2 / sigma2), bits per channel use.
inline double achieved_rate(ComplexSpan h, ComplexSpan w, double sigma2) {
    if (sigma2 <= 0.0) throw std::invalid_argument("achieved_rate: sigma2 must be positive");
    return std::log2(1.0 + std::norm(detail::dot(h, w)) / sigma2);
}

struct FeasibilityReport {
    // sqrt(P)*||h_hat|| - epsilon*sqrt(P) - sigma*sqrt(2^r - 1): the slack in
    // the worst-case rate constraint under the best possible beam alignment.
    double margin = 0.0;
    bool feasible = false;
};

// The robust rate constraint admits some w with ||w||^2 <= P exactly when the
// margin above is nonnegative: the best beam points along h_hat at full
// power, and the error ball costs at most epsilon*sqrt(P) of amplitude.
inline FeasibilityReport check_feasibility(const RobustInstance& inst) {
    if (inst.power < 0.0) throw std::invalid_argument("check_feasibility: negative power");
    if (inst.epsilon < 0.0) throw std::invalid_argument("check_feasibility: negative epsilon");
    const double sqrt_p = std::sqrt(inst.power);
    const double margin = sqrt_p * (detail::norm(inst.h_hat) - inst.epsilon) -
                          std::sqrt(rate_threshold(inst.rate_target, inst.sigma2));
    return {margin, margin >= -kFeasibilityTol};
}

}  // namespace swiptbeam
