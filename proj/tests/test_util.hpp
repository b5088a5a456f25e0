#pragma once
// Shared helpers for the test binaries. Kept Catch-free so the acceptance
// runner can reuse them.

#include <swiptbeam/model.hpp>
#include <swiptbeam/rng.hpp>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <sys/wait.h>

namespace testutil {

inline swiptbeam::ChannelVector cvec(std::initializer_list<std::complex<double>> xs) {
    return swiptbeam::ChannelVector(xs);
}

// Relative difference with a unit floor, so near-zero values compare absolutely.
inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

inline bool rel_close(double a, double b, double tol) { return rel_diff(a, b) <= tol; }

// Distance between a and b modulo a global phase: the minimizing rotation is
// the phase of b^H a.
inline double phase_align_distance(swiptbeam::ComplexSpan a, swiptbeam::ComplexSpan b) {
    if (a.size() != b.size()) throw std::invalid_argument("phase_align_distance: length");
    std::complex<double> inner = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) inner += std::conj(b[i]) * a[i];
    const double mag = std::abs(inner);
    const std::complex<double> phase = mag > 0.0 ? inner / mag : std::complex<double>(1.0, 0.0);
    double sq = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sq += std::norm(a[i] - phase * b[i]);
    return std::sqrt(sq);
}

// Random instance that is strictly feasible: epsilon below the channel norm
// and a rate target at a uniform fraction of the worst-case budget.
inline swiptbeam::RobustInstance random_feasible_instance(swiptbeam::RandomStream& rng,
                                                          std::size_t n) {
    swiptbeam::RobustInstance inst;
    inst.power = 10.0;
    inst.sigma2 = 1.0;
    inst.epsilon = 0.5 * rng.uniform01();

    auto draw = [&](swiptbeam::ChannelVector& v) {
        v.resize(n);
        for (auto& z : v) z = rng.normal_complex();
    };
    draw(inst.h_hat);
    while (swiptbeam::detail::norm(inst.h_hat) <= inst.epsilon + 1e-6) draw(inst.h_hat);
    draw(inst.g_hat);
    while (swiptbeam::detail::norm(inst.g_hat) == 0.0) draw(inst.g_hat);

    const double budget =
        std::sqrt(inst.power) * (swiptbeam::detail::norm(inst.h_hat) - inst.epsilon);
    const double s = 0.05 + 0.90 * rng.uniform01();
    const double gamma = (s * budget) * (s * budget);
    inst.rate_target = std::log2(1.0 + gamma / inst.sigma2);
    return inst;
}

inline std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;  // ties share the mean rank
        for (std::size_t k = i; k <= j; ++k) ranks[idx[k]] = r;
        i = j + 1;
    }
    return ranks;
}

// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("spearman: need two equal-length series");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

inline std::filesystem::path temp_dir() {
    auto dir = std::filesystem::temp_directory_path() / "swiptbeam_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

inline std::filesystem::path write_temp_file(const std::string& name, const std::string& content) {
    const auto path = temp_dir() / name;
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.close();
    return path;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct CliResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

// Runs the CLI through the shell, capturing exit code and both streams.
inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    const auto dir = temp_dir();
    const auto out_path = dir / ("cli_out_" + std::to_string(++counter) + ".txt");
    const auto err_path = dir / ("cli_err_" + std::to_string(counter) + ".txt");
    const std::string cmd = std::string(SWIPTBEAM_CLI_PATH) + " " + args + " > " +
                            out_path.string() + " 2> " + err_path.string();
    const int raw = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = read_file(out_path);
    r.err = read_file(err_path);
    return r;
}

}  // namespace testutil
