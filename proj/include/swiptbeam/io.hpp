#pragma once

#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "model.hpp"
#include "montecarlo.hpp"
#include "solver.hpp"
#include "worstcase.hpp"

namespace swiptbeam {

// Parse failure with the offending field when one can be named; an empty
// field means the document itself was unusable.
struct ParseError : std::runtime_error {
    std::string field;
    ParseError(std::string f, const std::string& msg)
        : std::runtime_error(msg), field(std::move(f)) {}
};

namespace detail {

inline nlohmann::json complex_array(ComplexSpan v) {
    auto arr = nlohmann::json::array();
    for (const auto& z : v) arr.push_back({z.real(), z.imag()});
    return arr;
}

inline ChannelVector parse_complex_array(const nlohmann::json& j, const std::string& field,
                                         std::size_t expected) {
    if (!j.is_array())
        throw ParseError(field, field + " must be an array of [re, im] pairs");
    if (j.size() != expected)
        throw ParseError(field, field + " must have length " + std::to_string(expected));
    ChannelVector out;
    out.reserve(j.size());
    for (const auto& el : j) {
        if (!el.is_array() || el.size() != 2 || !el[0].is_number() || !el[1].is_number())
            throw ParseError(field, field + " entries must be [re, im] number pairs");
        const double re = el[0].get<double>();
        const double im = el[1].get<double>();
        if (!std::isfinite(re) || !std::isfinite(im))
            throw ParseError(field, field + " entries must be finite");
        out.emplace_back(re, im);
    }
    return out;
}

inline double require_number(const nlohmann::json& j, const std::string& field) {
    if (!j.contains(field)) throw ParseError(field, "missing field " + field);
    if (!j.at(field).is_number()) throw ParseError(field, field + " must be a number");
    const double v = j.at(field).get<double>();
    if (!std::isfinite(v)) throw ParseError(field, field + " must be finite");
    return v;
}

}  // namespace detail

inline RobustInstance parse_instance(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError("", std::string("malformed JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ParseError("", "instance must be a JSON object");
    if (!j.contains("n")) throw ParseError("n", "missing field n");
    if (!j.at("n").is_number_integer() || j.at("n").get<long long>() < 1)
        throw ParseError("n", "n must be a positive integer");
    const std::size_t n = j.at("n").get<std::size_t>();

    RobustInstance inst;
    if (!j.contains("h_hat")) throw ParseError("h_hat", "missing field h_hat");
    inst.h_hat = detail::parse_complex_array(j.at("h_hat"), "h_hat", n);
    if (!j.contains("g_hat")) throw ParseError("g_hat", "missing field g_hat");
    inst.g_hat = detail::parse_complex_array(j.at("g_hat"), "g_hat", n);
    inst.power = detail::require_number(j, "power");
    if (!(inst.power > 0.0)) throw ParseError("power", "power must be positive");
    inst.sigma2 = detail::require_number(j, "sigma2");
    if (!(inst.sigma2 > 0.0)) throw ParseError("sigma2", "sigma2 must be positive");
    inst.rate_target = detail::require_number(j, "rate_target");
    if (inst.rate_target < 0.0) throw ParseError("rate_target", "rate_target must be nonnegative");
    inst.epsilon = detail::require_number(j, "epsilon");
    if (inst.epsilon < 0.0) throw ParseError("epsilon", "epsilon must be nonnegative");
    return inst;
}

inline nlohmann::json instance_to_json(const RobustInstance& inst) {
    nlohmann::json j;
    j["n"] = inst.dim();
    j["h_hat"] = detail::complex_array(inst.h_hat);
    j["g_hat"] = detail::complex_array(inst.g_hat);
    j["power"] = inst.power;
    j["sigma2"] = inst.sigma2;
    j["rate_target"] = inst.rate_target;
    j["epsilon"] = inst.epsilon;
    return j;
}

inline std::string serialize_instance(const RobustInstance& inst) {
    return instance_to_json(inst).dump(2) + "\n";
}

inline nlohmann::json solution_to_json(const BeamformerSolution& sol) {
    nlohmann::json j;
    j["w"] = detail::complex_array(sol.w);
    j["guaranteed_energy"] = sol.guaranteed_energy;
    j["nominal_energy"] = sol.nominal_energy;
    j["lambda"] = sol.lambda;
    j["mu"] = sol.mu;
    j["duality_gap"] = sol.duality_gap;
    j["kkt_residuals"] = {{"primal_feas", sol.kkt.primal_feas},
                          {"dual_feas", sol.kkt.dual_feas},
                          {"comp_slack_rate", sol.kkt.comp_slack_rate},
                          {"comp_slack_power", sol.kkt.comp_slack_power},
                          {"stationarity", sol.kkt.stationarity}};
    j["path"] = to_string(sol.path);
    return j;
}

// Beamformer files hold {"w": [[re, im], ...]}; a solve output is accepted
// directly since it carries the same key.
inline Beamformer parse_beamformer(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& ex) {
        throw ParseError("", std::string("malformed JSON: ") + ex.what());
    }
    if (!j.is_object() || !j.contains("w")) throw ParseError("w", "missing field w");
    if (!j.at("w").is_array() || j.at("w").empty())
        throw ParseError("w", "w must be a nonempty array of [re, im] pairs");
    return detail::parse_complex_array(j.at("w"), "w", j.at("w").size());
}

inline nlohmann::json adversary_to_json(const AdversaryReport& rep) {
    nlohmann::json j;
    j["n_samples"] = rep.n_samples;
    j["min_energy"] = rep.min_energy;
    j["min_rate"] = rep.min_rate;
    j["closed_form_energy"] = rep.closed_form_energy;
    j["closed_form_rate_power"] = rep.closed_form_rate_power;
    j["rate_outage"] = rep.rate_outage;
    j["energy_bound_violated"] = rep.energy_bound_violated;
    return j;
}

inline constexpr const char* kReportCsvHeader =
    "r,epsilon,n_feasible,avg_guaranteed_energy,avg_empirical_min_energy,"
    "avg_nominal_energy,robust_outage_pct,nonrobust_outage_pct";

// 17 significant digits: enough for bit-exact double round trips.
inline std::string format_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string report_to_csv(const SimReport& rep) {
    std::string out = kReportCsvHeader;
    out += '\n';
    for (const SimRow& row : rep.rows) {
        out += format_double(row.rate_target);
        out += ',';
        out += format_double(row.epsilon);
        out += ',';
        out += std::to_string(row.n_feasible);
        out += ',';
        out += format_double(row.avg_guaranteed_energy);
        out += ',';
        out += format_double(row.avg_empirical_min_energy);
        out += ',';
        out += format_double(row.avg_nominal_energy);
        out += ',';
        out += format_double(row.robust_outage_pct);
        out += ',';
        out += format_double(row.nonrobust_outage_pct);
        out += '\n';
    }
    return out;
}

}  // namespace swiptbeam
