#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "model.hpp"
#include "worstcase.hpp"

// Maximizes the guaranteed harvested energy of a transmit beam subject to a
// worst-case information rate constraint over the channel error ball:
//
//   max_w  min_{||dg|| <= eps} |(g_hat + dg)^H w|^2
//   s.t.   min_{||dh|| <= eps} log2(1 + |(h_hat + dh)^H w|^2 / sigma2) >= r,
//          ||w||^2 <= P.
//
// Both inner minima have closed forms (worst_case_amplitude), which reduces
// the problem to maximizing |g_hat^H w| subject to |h_hat^H w|^2 >= beta and
// the power budget. Two independent routes are provided: a direct closed form
// in the plane spanned by the channels, and a Lagrangian dual route that
// minimizes a 1-D convex dual and recovers the beam from the top eigenvector,
// certified a posteriori by KKT residuals. A dense grid search over the same
// plane serves as a slow reference.

namespace swiptbeam {

struct InfeasibleInstance : std::runtime_error {
    double margin;
    explicit InfeasibleInstance(double m)
        : std::runtime_error("no beamformer meets the worst-case rate constraint (margin " +
                             std::to_string(m) + ")"),
          margin(m) {}
};

struct ToleranceNotReached : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SolvePath { dual_sdp, closed_form, grid };

inline const char* to_string(SolvePath p) {
    switch (p) {
        case SolvePath::dual_sdp: return "dual_sdp";
        case SolvePath::closed_form: return "closed_form";
        case SolvePath::grid: return "grid";
    }
    return "unknown";
}

// Residuals of the first-order system for the reduced problem, all absolute:
//   primal_feas      violation of |h_hat^H w|^2 >= beta and ||w||^2 <= P
//   dual_feas        max(0, lammax(G + lambda H) - mu)
//   comp_slack_rate  lambda * |  |h_hat^H w|^2 - beta |
//   comp_slack_power mu * | ||w||^2 - P |
//   stationarity     || (G + lambda H - mu I) w ||
// with G = g_hat g_hat^H and H = h_hat h_hat^H.
struct KktReport {
    double primal_feas = 0.0;
    double dual_feas = 0.0;
    double comp_slack_rate = 0.0;
    double comp_slack_power = 0.0;
    double stationarity = 0.0;

    double max_residual() const {
        return std::max({primal_feas, dual_feas, comp_slack_rate, comp_slack_power, stationarity});
    }
};

struct BeamformerSolution {
    Beamformer w;
    double guaranteed_energy = 0.0;  // worst-case harvested energy over the ball
    double nominal_energy = 0.0;     // harvested energy at the channel estimate
    double lambda = 0.0;             // multiplier of the rate constraint
    double mu = 0.0;                 // multiplier of the power constraint
    double duality_gap = 0.0;        // |dual value - nominal| / max(1, nominal)
    KktReport kkt;
    SolvePath path = SolvePath::closed_form;
};

// KKT residuals this large abort the dual route with ToleranceNotReached.
inline constexpr double kKktGate = 1e-7;

// Rate-power threshold of the reduced constraint |h_hat^H w| >= sqrt(beta):
// beta = (epsilon sqrt(P) + sigma sqrt(2^r - 1))^2. Folding the worst-case
// amplitude loss into the threshold is what makes the constraint
// deterministic.
inline double beta(const RobustInstance& inst) {
    if (inst.power < 0.0) throw std::invalid_argument("beta: negative power");
    if (inst.epsilon < 0.0) throw std::invalid_argument("beta: negative epsilon");
    const double root = inst.epsilon * std::sqrt(inst.power) +
                        std::sqrt(rate_threshold(inst.rate_target, inst.sigma2));
    return root * root;
}

namespace detail {

// Top eigenpair of the Hermitian 2x2 [[a, b], [conj(b), c]]. The eigenvector
// (p, q) is unit-norm with q real; theta - a is evaluated as |b|^2 / (theta - c)
// to dodge cancellation when b is small.
inline void top_eig_2x2(double a, double c, std::complex<double> b, double& theta,
                        std::complex<double>& p, double& q) {
    const double half = 0.5 * (a - c);
    const double disc = std::sqrt(half * half + std::norm(b));
    theta = 0.5 * (a + c) + disc;
    const double theta_minus_c = disc + half;
    const double vq = theta_minus_c > 0.0 ? std::norm(b) / theta_minus_c : c - a;
    const double nrm2 = std::norm(b) + vq * vq;
    if (nrm2 <= 0.0) {
        p = a >= c ? 1.0 : 0.0;
        q = a >= c ? 0.0 : 1.0;
        return;
    }
    const double inv = 1.0 / std::sqrt(nrm2);
    p = b * inv;
    q = vq * inv;
}

// Orthonormal basis of span{h_hat, g_hat}: u1 along h_hat, u2 the unit
// residual of g_hat against it. In these coordinates h_hat = (||h_hat||, 0)
// and g_hat = (g1, g2) with g2 real and nonnegative; u2 stays empty when the
// channels are collinear. Requires h_hat != 0.
struct Plane {
    ChannelVector u1, u2;
    std::complex<double> g1{0.0, 0.0};
    double g2 = 0.0;
    double h_norm = 0.0;
    double g_norm = 0.0;
};

inline Plane make_plane(ComplexSpan h_hat, ComplexSpan g_hat) {
    Plane pl;
    const std::size_t n = h_hat.size();
    pl.h_norm = norm(h_hat);
    pl.g_norm = norm(g_hat);
    pl.u1.resize(n);
    for (std::size_t i = 0; i < n; ++i) pl.u1[i] = h_hat[i] / pl.h_norm;
    pl.g1 = dot(pl.u1, g_hat);
    ChannelVector resid(n);
    double rn2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        resid[i] = g_hat[i] - pl.g1 * pl.u1[i];
        rn2 += std::norm(resid[i]);
    }
    const double rn = std::sqrt(rn2);
    if (rn > 1e-14 * std::max(1.0, pl.g_norm)) {
        pl.g2 = rn;
        for (auto& z : resid) z /= rn;
        pl.u2 = std::move(resid);
    }
    return pl;
}

inline Beamformer assemble(const Plane& pl, std::complex<double> a, double b) {
    Beamformer w(pl.u1.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = a * pl.u1[i];
        if (b != 0.0 && !pl.u2.empty()) w[i] += b * pl.u2[i];
    }
    return w;
}

struct Duals {
    double lambda = 0.0;
    double mu = 0.0;
};

// Multipliers determined by stationarity at the planar point (x, y) with
// objective value s = |g1| x + g2 y: the u2 component fixes mu, the u1
// component fixes lambda. When y vanishes (beam pinned to the h_hat
// direction) exact multipliers need not exist; the returned pair then only
// balances the u1 component.
inline Duals planar_multipliers(const Plane& pl, double x, double y, double s, double sqrt_p) {
    const double hn2 = pl.h_norm * pl.h_norm;
    const double ag1 = std::abs(pl.g1);
    Duals d;
    if (pl.g2 > 0.0 && y > 1e-12 * sqrt_p) {
        d.mu = s * pl.g2 / y;
        d.lambda = x > 0.0 ? std::max(0.0, (d.mu * x - s * ag1) / (hn2 * x)) : 0.0;
    } else {
        d.lambda = 0.0;
        d.mu = x > 0.0 ? s * ag1 / x : pl.g_norm * pl.g_norm;
    }
    return d;
}

}  // namespace detail

// Largest eigenvalue of g_hat g_hat^H + lambda h_hat h_hat^H, computed on the
// span of the two channels, so the cost does not depend on the ambient
// dimension.
inline double lambda_max_2d(ComplexSpan g_hat, ComplexSpan h_hat, double lambda) {
    if (g_hat.size() != h_hat.size()) throw DimensionMismatch("lambda_max_2d: length mismatch");
    if (lambda < 0.0) throw std::invalid_argument("lambda_max_2d: negative multiplier");
    const double hn2 = detail::squared_norm(h_hat);
    const double gn2 = detail::squared_norm(g_hat);
    if (hn2 == 0.0 && gn2 == 0.0) throw std::invalid_argument("lambda_max_2d: both channels zero");
    if (hn2 == 0.0) return gn2;
    if (gn2 == 0.0) return lambda * hn2;
    const std::complex<double> g1 = detail::dot(h_hat, g_hat) / std::sqrt(hn2);
    const double g2sq = std::max(0.0, gn2 - std::norm(g1));
    double theta;
    std::complex<double> p;
    double q;
    detail::top_eig_2x2(lambda * hn2 + std::norm(g1), g2sq, g1 * std::sqrt(g2sq), theta, p, q);
    return theta;
}

// Residuals of a candidate solution against the first-order system; see
// KktReport for the exact expressions. Pure measurement, no thresholds.
inline KktReport verify_kkt(const RobustInstance& inst, const BeamformerSolution& sol) {
    const std::size_t n = inst.dim();
    if (sol.w.size() != n || inst.g_hat.size() != n)
        throw DimensionMismatch("verify_kkt: length mismatch");
    const double b = beta(inst);
    const std::complex<double> hw = detail::dot(inst.h_hat, sol.w);
    const std::complex<double> gw = detail::dot(inst.g_hat, sol.w);
    const double tr_hw = std::norm(hw);
    const double tr_w = detail::squared_norm(sol.w);

    KktReport k;
    k.primal_feas = std::max(std::max(0.0, b - tr_hw), std::max(0.0, tr_w - inst.power));
    const bool zero_channels =
        detail::squared_norm(inst.h_hat) == 0.0 && detail::squared_norm(inst.g_hat) == 0.0;
    const double top = zero_channels ? 0.0 : lambda_max_2d(inst.g_hat, inst.h_hat, sol.lambda);
    k.dual_feas = std::max(0.0, top - sol.mu);
    k.comp_slack_rate = sol.lambda * std::abs(tr_hw - b);
    k.comp_slack_power = sol.mu * std::abs(tr_w - inst.power);
    double st = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> r =
            inst.g_hat[i] * gw + sol.lambda * inst.h_hat[i] * hw - sol.mu * sol.w[i];
        st += std::norm(r);
    }
    k.stationarity = std::sqrt(st);
    return k;
}

namespace detail {

inline BeamformerSolution finish_solution(const RobustInstance& inst, Beamformer w, double lambda,
                                          double mu, SolvePath path) {
    const double wn = norm(w);
    if (wn > 0.0) {
        const double scale = std::sqrt(inst.power) / wn;
        for (auto& z : w) z *= scale;
    }
    BeamformerSolution sol;
    sol.w = std::move(w);
    sol.lambda = lambda;
    sol.mu = mu;
    sol.path = path;
    sol.nominal_energy = harvested_energy(inst.g_hat, sol.w);
    sol.guaranteed_energy = worst_case_energy(inst.g_hat, inst.epsilon, sol.w);
    const double dual_value = mu * inst.power - lambda * beta(inst);
    sol.duality_gap = std::abs(dual_value - sol.nominal_energy) / std::max(1.0, sol.nominal_energy);
    sol.kkt = verify_kkt(inst, sol);
    return sol;
}

inline void check_solvable(const RobustInstance& inst) {
    const std::size_t n = inst.dim();
    if (n == 0 || inst.g_hat.size() != n)
        throw DimensionMismatch("solver: channel lengths inconsistent");
    if (!(inst.power > 0.0)) throw std::invalid_argument("solver: power must be positive");
    if (!detail::all_finite(inst.h_hat) || !detail::all_finite(inst.g_hat))
        throw std::invalid_argument("solver: non-finite channel entry");
    const FeasibilityReport feas = check_feasibility(inst);
    if (!feas.feasible) throw InfeasibleInstance(feas.margin);
}

// Rate-feasible beam for the degenerate g_hat = 0 instance (objective is
// identically zero).
inline BeamformerSolution zero_objective_solution(const RobustInstance& inst, SolvePath path) {
    const std::size_t n = inst.dim();
    const double sqrt_p = std::sqrt(inst.power);
    const double hn = norm(inst.h_hat);
    Beamformer w(n, {0.0, 0.0});
    if (hn > 0.0) {
        for (std::size_t i = 0; i < n; ++i) w[i] = sqrt_p * inst.h_hat[i] / hn;
    } else {
        w[0] = sqrt_p;
    }
    return finish_solution(inst, std::move(w), 0.0, 0.0, path);
}

inline BeamformerSolution matched_filter_solution(const RobustInstance& inst, SolvePath path) {
    const std::size_t n = inst.dim();
    const double sqrt_p = std::sqrt(inst.power);
    const double gn2 = squared_norm(inst.g_hat);
    const double gn = std::sqrt(gn2);
    Beamformer w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = sqrt_p * inst.g_hat[i] / gn;
    return finish_solution(inst, std::move(w), 0.0, gn2, path);
}

}  // namespace detail

// Closed-form route. In the channel plane the problem is
//
//   max  |g1| x + g2 y   s.t.  x^2 + y^2 = P,  x >= x_min = sqrt(beta)/||h_hat||
//
// with x >= 0 the power on the (phase-aligned) h_hat direction and y >= 0 on
// the residual direction. If the matched filter x = sqrt(P)|g1|/||g_hat||
// clears x_min it is optimal; otherwise the rate constraint is tight and the
// leftover power goes to the residual direction. A zero rate target needs no
// constraint at all (the worst-case rate is clamped at zero), so the matched
// filter is returned outright.
inline BeamformerSolution solve_closed_form(const RobustInstance& inst) {
    detail::check_solvable(inst);
    const double sqrt_p = std::sqrt(inst.power);
    const double gn2 = detail::squared_norm(inst.g_hat);
    if (gn2 == 0.0) return detail::zero_objective_solution(inst, SolvePath::closed_form);

    const double gamma = rate_threshold(inst.rate_target, inst.sigma2);
    if (gamma == 0.0) return detail::matched_filter_solution(inst, SolvePath::closed_form);

    // gamma > 0 and feasible force ||h_hat|| > 0
    const detail::Plane pl = detail::make_plane(inst.h_hat, inst.g_hat);
    const double x_min = std::min(std::sqrt(beta(inst)) / pl.h_norm, sqrt_p);
    const double x_unc = sqrt_p * std::abs(pl.g1) / pl.g_norm;

    if (x_unc >= x_min) return detail::matched_filter_solution(inst, SolvePath::closed_form);

    const double x = x_min;
    const double y = std::sqrt(std::max(0.0, inst.power - x * x));
    const double ag1 = std::abs(pl.g1);
    const std::complex<double> phase = ag1 > 0.0 ? pl.g1 / ag1 : std::complex<double>{1.0, 0.0};
    const double s = ag1 * x + pl.g2 * y;
    const detail::Duals duals = detail::planar_multipliers(pl, x, y, s, sqrt_p);
    Beamformer w = detail::assemble(pl, x * phase, y);
    return detail::finish_solution(inst, std::move(w), duals.lambda, duals.mu,
                                   SolvePath::closed_form);
}

// Dual route. With G = g_hat g_hat^H and H = h_hat h_hat^H the dual of the
// rank-relaxed problem is the 1-D convex minimization
//
//   min_{lambda >= 0}  f(lambda) = P lammax(G + lambda H) - lambda beta,
//
// whose derivative is c(lambda) = P |h_hat^H v(lambda)|^2 - beta with v the
// top unit eigenvector. The minimum is bracketed by doubling on the sign of
// c, narrowed by golden section, and the root of c is polished to the
// floating point floor (Illinois secant). The beam is recovered as Q^{-1}
// g_hat with Q = mu I - lambda H, which is positive definite unless the
// channels are (numerically) orthogonal; that degenerate case falls back to
// the closed form. The returned solution is certified by its KKT residuals
// and duality gap; failure to certify raises ToleranceNotReached.
inline BeamformerSolution solve_dual_sdp(const RobustInstance& inst) {
    detail::check_solvable(inst);
    const double sqrt_p = std::sqrt(inst.power);
    const double p_budget = inst.power;
    const double gn2 = detail::squared_norm(inst.g_hat);
    if (gn2 == 0.0) return solve_closed_form(inst);

    const double gamma = rate_threshold(inst.rate_target, inst.sigma2);
    if (gamma == 0.0) return detail::matched_filter_solution(inst, SolvePath::dual_sdp);

    const detail::Plane pl = detail::make_plane(inst.h_hat, inst.g_hat);
    const double b_thr = beta(inst);
    const double x_min = std::min(std::sqrt(b_thr) / pl.h_norm, sqrt_p);
    const double x_unc = sqrt_p * std::abs(pl.g1) / pl.g_norm;

    BeamformerSolution sol;
    if (x_unc >= x_min) {
        sol = detail::matched_filter_solution(inst, SolvePath::dual_sdp);
    } else {
        const double hn2 = pl.h_norm * pl.h_norm;
        const double ag1sq = std::norm(pl.g1);
        const double g2sq = pl.g2 * pl.g2;
        const std::complex<double> off = pl.g1 * pl.g2;

        struct Eval {
            double f, c, theta;
        };
        const auto eval = [&](double lam) {
            double theta;
            std::complex<double> p;
            double q;
            detail::top_eig_2x2(lam * hn2 + ag1sq, g2sq, off, theta, p, q);
            return Eval{p_budget * theta - lam * b_thr, p_budget * hn2 * std::norm(p) - b_thr,
                        theta};
        };

        // c(0) < 0 here, since the matched filter missed x_min
        double lo = 0.0, lo_c = eval(0.0).c;
        double hi = 1.0, hi_c = eval(1.0).c;
        int guard = 0;
        while (hi_c <= 0.0) {
            lo = hi;
            lo_c = hi_c;
            hi *= 2.0;
            hi_c = eval(hi).c;
            if (++guard > 120)
                throw ToleranceNotReached(
                    "dual multiplier diverges: rate constraint sits on the power boundary");
        }

        // golden section on the dual value
        const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
        double ga = lo, gb = hi;
        double x1 = gb - invphi * (gb - ga), x2 = ga + invphi * (gb - ga);
        double f1 = eval(x1).f, f2 = eval(x2).f;
        while (gb - ga > 1e-12 * (1.0 + gb)) {
            if (f1 <= f2) {
                gb = x2;
                x2 = x1;
                f2 = f1;
                x1 = gb - invphi * (gb - ga);
                f1 = eval(x1).f;
            } else {
                ga = x1;
                x1 = x2;
                f1 = f2;
                x2 = ga + invphi * (gb - ga);
                f2 = eval(x2).f;
            }
        }
        double lambda = 0.5 * (ga + gb);

        // hand the narrowed interval to the polish where the signs allow it
        const double ca = eval(ga).c;
        if (ca <= 0.0 && ga > lo) {
            lo = ga;
            lo_c = ca;
        }
        const double cb = eval(gb).c;
        if (cb > 0.0 && gb < hi) {
            hi = gb;
            hi_c = cb;
        }

        // polish the root of the (nondecreasing) derivative
        const double c_tol = 1e-13 * std::max(1.0, b_thr);
        int side = 0;
        for (int it = 0; it < 200; ++it) {
            double mid = (lo * hi_c - hi * lo_c) / (hi_c - lo_c);
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
            const double cm = eval(mid).c;
            lambda = mid;
            if (std::abs(cm) <= c_tol || hi - lo <= 1e-15 * (1.0 + mid)) break;
            if (cm > 0.0) {
                hi = mid;
                hi_c = cm;
                if (side == 1) lo_c *= 0.5;
                side = 1;
            } else {
                lo = mid;
                lo_c = cm;
                if (side == -1) hi_c *= 0.5;
                side = -1;
            }
        }

        const double mu = eval(lambda).theta;
        const double q_min = mu - lambda * hn2;  // smallest eigenvalue of mu I - lambda H
        if (!(mu > 0.0) || q_min < 1e-10 * mu) return solve_closed_form(inst);

        const std::complex<double> d1 = pl.g1 / q_min;
        const double d2 = pl.g2 / mu;
        const double dn = std::sqrt(std::norm(d1) + d2 * d2);
        Beamformer w = detail::assemble(pl, sqrt_p * d1 / dn, sqrt_p * d2 / dn);
        sol = detail::finish_solution(inst, std::move(w), lambda, mu, SolvePath::dual_sdp);
    }

    const double worst = std::max(sol.kkt.max_residual(), sol.duality_gap);
    if (worst > kKktGate)
        throw ToleranceNotReached("dual route failed certification (residual " +
                                  std::to_string(worst) + ")");
    return sol;
}

// Reference route: dense scan of x on [x_min, sqrt(P)] in the same planar
// parameterization, then golden-section refinement of the concave objective
// around the best cell. Shares the geometry but none of the KKT machinery
// with the other routes, so agreement is a meaningful cross-check.
inline BeamformerSolution solve_grid_oracle(const RobustInstance& inst, int resolution = 20000) {
    detail::check_solvable(inst);
    if (resolution < 100) throw std::invalid_argument("solve_grid_oracle: resolution below 100");
    const double sqrt_p = std::sqrt(inst.power);
    const double gn2 = detail::squared_norm(inst.g_hat);
    if (gn2 == 0.0) return detail::zero_objective_solution(inst, SolvePath::grid);

    const double gamma = rate_threshold(inst.rate_target, inst.sigma2);
    const double hn = detail::norm(inst.h_hat);
    if (hn == 0.0) {
        // feasibility then forces gamma ~ 0: no rate constraint survives
        return detail::matched_filter_solution(inst, SolvePath::grid);
    }

    const detail::Plane pl = detail::make_plane(inst.h_hat, inst.g_hat);
    const double x_lo = gamma > 0.0 ? std::min(std::sqrt(beta(inst)) / pl.h_norm, sqrt_p) : 0.0;
    const double ag1 = std::abs(pl.g1);
    const auto value = [&](double x) {
        return ag1 * x + pl.g2 * std::sqrt(std::max(0.0, inst.power - x * x));
    };

    int best = 0;
    double best_val = -1.0;
    const double width = sqrt_p - x_lo;
    for (int i = 0; i <= resolution; ++i) {
        const double v = value(x_lo + width * i / resolution);
        if (v > best_val) {
            best_val = v;
            best = i;
        }
    }

    // refine inside the bracketing cells; the objective is concave in x
    double a = x_lo + width * std::max(0, best - 1) / resolution;
    double b = x_lo + width * std::min(resolution, best + 1) / resolution;
    const double invphi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - invphi * (b - a), x2 = a + invphi * (b - a);
    double f1 = value(x1), f2 = value(x2);
    while (b - a > 1e-13 * (1.0 + sqrt_p)) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = value(x2);
        }
    }
    const double x = std::clamp(0.5 * (a + b), x_lo, sqrt_p);
    const double y = std::sqrt(std::max(0.0, inst.power - x * x));
    const double s = value(x);
    const std::complex<double> phase = ag1 > 0.0 ? pl.g1 / ag1 : std::complex<double>{1.0, 0.0};
    const detail::Duals duals = detail::planar_multipliers(pl, x, y, s, sqrt_p);
    Beamformer w = detail::assemble(pl, x * phase, y);
    return detail::finish_solution(inst, std::move(w), duals.lambda, duals.mu, SolvePath::grid);
}

// Nominal design that trusts the channel estimates: solves the instance with
// the error radius forced to zero. Callers evaluate the result against
// perturbed channels afterwards.
inline BeamformerSolution solve_nonrobust(const RobustInstance& inst) {
    RobustInstance nominal = inst;
    nominal.epsilon = 0.0;
    return solve_closed_form(nominal);
}

struct RankOneExtraction {
    Beamformer w;
    double rank1_defect = 0.0;  // second eigenvalue over the first
};

// Splits a Hermitian PSD matrix into its dominant rank-one factor
// sqrt(lambda_1) v_1; rank1_defect near zero certifies W ~ w w^H. The phase
// is fixed by making the largest component of w real and positive.
inline RankOneExtraction extract_beamformer(const Eigen::MatrixXcd& W) {
    const Eigen::Index n = W.rows();
    if (n == 0 || W.cols() != n)
        throw std::invalid_argument("extract_beamformer: matrix must be square and nonempty");
    const double scale = W.cwiseAbs().maxCoeff();
    if (!((W - W.adjoint()).cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, scale)))
        throw std::invalid_argument("extract_beamformer: matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("extract_beamformer: eigendecomposition failed");
    const double top = es.eigenvalues()(n - 1);
    if (!(top > 0.0))
        throw std::invalid_argument("extract_beamformer: no positive eigenvalue");

    RankOneExtraction out;
    out.rank1_defect = n > 1 ? std::max(0.0, es.eigenvalues()(n - 2)) / top : 0.0;
    Eigen::VectorXcd v = es.eigenvectors().col(n - 1);
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const std::complex<double> pivot = v(imax);
    const double pmag = std::abs(pivot);
    const std::complex<double> rot = pmag > 0.0 ? std::conj(pivot) / pmag : 1.0;
    const double amp = std::sqrt(top);
    out.w.resize(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.w[static_cast<std::size_t>(i)] = amp * rot * v(i);
    return out;
}

}  // namespace swiptbeam
