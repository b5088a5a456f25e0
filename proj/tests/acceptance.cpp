// Acceptance gate for the whole artifact. Each criterion prints exactly one
// [PASS]/[FAIL] line; the process exits with the number of failed criteria.
// Tolerances are pinned here, not read from anywhere else.

#include <swiptbeam/io.hpp>
#include <swiptbeam/model.hpp>
#include <swiptbeam/montecarlo.hpp>
#include <swiptbeam/rng.hpp>
#include <swiptbeam/solver.hpp>
#include <swiptbeam/worstcase.hpp>

#include "test_util.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace swiptbeam;
using testutil::rel_diff;

namespace {

int g_failures = 0;

void report(int index, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", index, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Eigen::MatrixXcd rank_one_matrix(ComplexSpan w) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) v(static_cast<Eigen::Index>(i)) = w[i];
    return v * v.adjoint();
}

struct SolvedInstance {
    RobustInstance inst;
    BeamformerSolution dual;
    BeamformerSolution closed;
    BeamformerSolution grid;
};

// Criteria 1 and 2 share one batch of seeded feasible instances.
std::vector<SolvedInstance> solve_batch(std::string& failure) {
    std::vector<SolvedInstance> out;
    RandomStream rng(314159);
    for (std::size_t n : {2, 3, 4, 8}) {
        for (int i = 0; i < 30; ++i) {
            SolvedInstance s;
            s.inst = testutil::random_feasible_instance(rng, n);
            try {
                s.dual = solve_dual_sdp(s.inst);
                s.closed = solve_closed_form(s.inst);
                s.grid = solve_grid_oracle(s.inst, 10000);
            } catch (const std::exception& e) {
                failure = "solver threw on instance n=" + std::to_string(n) + " #" +
                          std::to_string(i) + ": " + e.what();
                return out;
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

void criterion_oracle_equivalence(const std::vector<SolvedInstance>& batch,
                                  const std::string& batch_failure, double batch_seconds) {
    const double kDualClosedTol = 1e-6;
    const double kClosedGridTol = 1e-3;
    const double kBudgetSeconds = 10.0;

    if (!batch_failure.empty()) {
        report(1, "independent solution routes agree", false, batch_failure);
        return;
    }
    double worst_dc = 0.0, worst_cg = 0.0;
    for (const SolvedInstance& s : batch) {
        worst_dc = std::max(worst_dc,
                            rel_diff(s.dual.guaranteed_energy, s.closed.guaranteed_energy));
        worst_cg = std::max(worst_cg,
                            rel_diff(s.closed.guaranteed_energy, s.grid.guaranteed_energy));
    }
    const bool pass = batch.size() >= 100 && worst_dc <= kDualClosedTol &&
                      worst_cg <= kClosedGridTol && batch_seconds < kBudgetSeconds;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%zu instances, %.2f s, worst dual-closed %.2e, worst closed-grid %.2e",
                  batch.size(), batch_seconds, worst_dc, worst_cg);
    report(1, "independent solution routes agree", pass, detail);
}

void criterion_kkt_suite(const std::vector<SolvedInstance>& batch,
                         const std::string& batch_failure) {
    const double kGapTol = 1e-7;
    const double kResidualTol = 1e-7;
    const double kPowerTol = 1e-8;
    const double kDefectTol = 1e-9;

    if (!batch_failure.empty()) {
        report(2, "duality certificates are tight", false, batch_failure);
        return;
    }
    double worst_gap = 0.0, worst_res = 0.0, worst_pow = 0.0, worst_defect = 0.0;
    for (const SolvedInstance& s : batch) {
        worst_gap = std::max(worst_gap, s.dual.duality_gap);
        worst_res = std::max(worst_res, s.dual.kkt.max_residual());
        worst_pow = std::max(worst_pow,
                             rel_diff(detail::squared_norm(s.dual.w), s.inst.power));
        worst_defect =
            std::max(worst_defect, extract_beamformer(rank_one_matrix(s.dual.w)).rank1_defect);
    }
    const bool pass = worst_gap <= kGapTol && worst_res <= kResidualTol &&
                      worst_pow <= kPowerTol && worst_defect <= kDefectTol;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "worst gap %.2e, residual %.2e, power error %.2e, rank-1 defect %.2e",
                  worst_gap, worst_res, worst_pow, worst_defect);
    report(2, "duality certificates are tight", pass, detail);
}

void criterion_worst_case_exactness() {
    const double kSlackTol = 1e-10;
    const double kBudgetSeconds = 30.0;
    const int kTriples = 1000;
    const int kSamplesPerTriple = 10000;

    const auto t0 = std::chrono::steady_clock::now();
    RandomStream rng(271828);
    double worst_violation = 0.0;  // how far any sample dipped under the bound
    double worst_attainment = 0.0;
    const std::size_t dims[] = {1, 2, 3, 4, 8};
    for (int t = 0; t < kTriples; ++t) {
        const std::size_t n = dims[static_cast<std::size_t>(t) % 5];
        ChannelVector v(n);
        Beamformer w(n);
        for (auto& z : v) z = rng.normal_complex();
        double wn = 0.0;
        do {
            for (auto& z : w) z = rng.normal_complex();
            wn = detail::squared_norm(w);
        } while (wn == 0.0);
        const double eps = rng.uniform01_pos();

        const double bound = worst_case_energy(v, eps, w);
        const ErrorVector worst = worst_error_vector(v, eps, w);
        ChannelVector perturbed = v;
        for (std::size_t k = 0; k < n; ++k) perturbed[k] += worst.delta[k];
        worst_attainment =
            std::max(worst_attainment, std::abs(harvested_energy(perturbed, w) - bound));

        const std::complex<double> base = detail::dot(v, w);
        for (int s = 0; s < kSamplesPerTriple; ++s) {
            const ErrorVector err = sample_ball(
                eps, n, s % 2 == 0 ? BallMode::boundary : BallMode::interior, rng);
            const double q = std::norm(base + detail::dot(err.delta, w));
            worst_violation = std::max(worst_violation, bound - q);
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = worst_violation <= kSlackTol && worst_attainment <= kSlackTol &&
                      elapsed < kBudgetSeconds;
    char detail[160];
    std::snprintf(detail, sizeof detail,
                  "%d triples x %d samples, %.1f s, deepest dip %.2e, attainment error %.2e",
                  kTriples, kSamplesPerTriple, elapsed, worst_violation, worst_attainment);
    report(3, "sampled errors never beat the closed-form bound", pass, detail);
}

SimReport default_energy_campaign() {
    SimConfig cfg;
    cfg.seed = 12345;
    return energy_sweep(cfg);
}

void criterion_zero_target_average(const SimReport& rep) {
    const double kTol = 1e-9;
    // First row of the energy sweep is r = 0, eps = 0.
    bool pass = !rep.rows.empty();
    double got = 0.0;
    if (pass) {
        const SimRow& row = rep.rows.front();
        got = row.avg_nominal_energy;
        pass = row.rate_target == 0.0 && row.epsilon == 0.0 &&
               std::abs(got - 40.0) <= kTol && row.n_feasible == rep.n_channels;
    }
    char detail[120];
    std::snprintf(detail, sizeof detail, "avg nominal at r=0, eps=0: %.12f", got);
    report(4, "zero-rate zero-radius cell averages P times the channel norm", pass, detail);
}

void criterion_outage_behavior() {
    const double kBudgetSeconds = 60.0;
    const auto t0 = std::chrono::steady_clock::now();

    SimConfig cfg;
    cfg.seed = 271;
    const SimReport rep = outage_sweep(cfg);  // eps {0.1, 0.3, 0.5}, 12 rates
    const double elapsed = seconds_since(t0);

    bool robust_clean = true;
    for (const SimRow& row : rep.rows) robust_clean &= row.robust_outage_pct == 0.0;

    // Per epsilon >= 0.3: strictly positive outage over the top quartile of the
    // rate grid and a positive rank correlation across the whole grid.
    const std::size_t n_eps = 3, n_rates = rep.rows.size() / n_eps;
    const std::size_t quartile_start = n_rates - n_rates / 4;
    bool top_quartile_positive = true;
    bool trend_positive = true;
    for (std::size_t ei = 0; ei < n_eps; ++ei) {
        const double eps = rep.rows[ei].epsilon;
        if (eps < 0.3) continue;
        std::vector<double> rates, outage;
        for (std::size_t ri = 0; ri < n_rates; ++ri) {
            const SimRow& row = rep.rows[ri * n_eps + ei];
            rates.push_back(row.rate_target);
            outage.push_back(row.nonrobust_outage_pct);
            if (ri >= quartile_start && row.nonrobust_outage_pct <= 0.0)
                top_quartile_positive = false;
        }
        if (testutil::spearman(rates, outage) <= 0.0) trend_positive = false;
    }

    const bool pass = !rep.rows.empty() && rep.errors.empty() && robust_clean &&
                      top_quartile_positive && trend_positive && elapsed < kBudgetSeconds;
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "%.1f s; robust outage all zero: %s; top-quartile nonrobust positive: %s; "
                  "trend positive: %s",
                  elapsed, robust_clean ? "yes" : "no", top_quartile_positive ? "yes" : "no",
                  trend_positive ? "yes" : "no");
    report(5, "only the nominal design suffers outage, and more so at high rates", pass, detail);
}

void criterion_energy_monotonicity(const SimReport& rep) {
    const double kSlack = 1e-9;
    const std::size_t n_eps = 4;
    const std::size_t n_rates = rep.rows.size() / n_eps;
    const auto at = [&](std::size_t ri, std::size_t ei) -> const SimRow& {
        return rep.rows[ri * n_eps + ei];
    };

    bool monotone_rate = true, monotone_eps = true, dominates = true, widens = true;
    for (std::size_t ei = 0; ei < n_eps; ++ei)
        for (std::size_t ri = 1; ri < n_rates; ++ri)
            if (at(ri, ei).avg_guaranteed_energy >
                at(ri - 1, ei).avg_guaranteed_energy + kSlack)
                monotone_rate = false;
    for (std::size_t ri = 0; ri < n_rates; ++ri)
        for (std::size_t ei = 1; ei < n_eps; ++ei) {
            if (at(ri, ei).avg_guaranteed_energy >
                at(ri, ei - 1).avg_guaranteed_energy + kSlack)
                monotone_eps = false;
            if (at(ri, ei).avg_guaranteed_energy > at(ri, 0).avg_guaranteed_energy + kSlack)
                dominates = false;
        }
    for (std::size_t ei = 1; ei < n_eps; ++ei) {
        const double gap_low =
            at(0, 0).avg_guaranteed_energy - at(0, ei).avg_guaranteed_energy;
        const double gap_high = at(n_rates - 1, 0).avg_guaranteed_energy -
                                at(n_rates - 1, ei).avg_guaranteed_energy;
        if (gap_high < gap_low - kSlack) widens = false;
    }

    const bool pass = rep.rows.size() == n_eps * n_rates && monotone_rate && monotone_eps &&
                      dominates && widens;
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "non-increasing in r: %s; non-increasing in eps: %s; eps=0 dominates: %s; "
                  "gap widens: %s",
                  monotone_rate ? "yes" : "no", monotone_eps ? "yes" : "no",
                  dominates ? "yes" : "no", widens ? "yes" : "no");
    report(6, "guaranteed energy falls along both axes and the robustness price grows", pass,
           detail);
}

void criterion_cli_determinism() {
    const std::string cfg_text =
        "n_antennas = 4\npower = 10.0\nsigma2 = 1.0\n"
        "epsilons = [0.0, 0.3]\nrate_grid = [0.0, 1.5, 3.0, 4.5]\n"
        "n_channels = 25\nn_error_samples = 25\nseed = 60221\n";
    const auto cfg = testutil::write_temp_file("acceptance_campaign.toml", cfg_text);

    std::vector<std::string> outputs;
    bool all_ok = true;
    for (const std::string threads : {"1", "8", "1", "8"}) {
        const auto out =
            testutil::temp_dir() / ("acceptance_t" + threads + "_" +
                                    std::to_string(outputs.size()) + ".csv");
        const auto r = testutil::run_cli("simulate -c " + cfg.string() + " --threads " +
                                         threads + " -o " + out.string());
        all_ok &= r.exit_code == 0;
        outputs.push_back(testutil::read_file(out));
    }
    bool identical = all_ok && !outputs[0].empty();
    for (const std::string& o : outputs) identical &= o == outputs[0];

    char detail[120];
    std::snprintf(detail, sizeof detail, "4 runs over worker counts {1, 8}: %s",
                  identical ? "byte-identical" : "mismatch or failure");
    report(7, "simulate output bytes are identical across thread counts", identical, detail);
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string batch_failure;
    auto batch = solve_batch(batch_failure);
    const double batch_seconds = seconds_since(t0);

    criterion_oracle_equivalence(batch, batch_failure, batch_seconds);
    criterion_kkt_suite(batch, batch_failure);
    criterion_worst_case_exactness();

    const SimReport energy = default_energy_campaign();
    criterion_zero_target_average(energy);
    criterion_outage_behavior();
    criterion_energy_monotonicity(energy);
    criterion_cli_determinism();

    return g_failures;
}
