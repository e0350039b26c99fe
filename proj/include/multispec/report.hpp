#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "multispec/construction.hpp"
#include "multispec/kernel.hpp"
#include "multispec/pipeline.hpp"
#include "multispec/spectral.hpp"
#include "multispec/suites.hpp"

namespace multispec {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

using json = nlohmann::json;

inline json base_report(const std::string& command) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["tool_version"] = kToolVersion;
    j["command"] = command;
    return j;
}

inline json to_json(const Spectrum& s) {
    json j;
    j["values"] = s.values;
    j["group_tol"] = s.group_tol;
    json groups = json::array();
    for (const auto& g : s.groups)
        groups.push_back({{"value", g.value}, {"count", g.count}});
    j["groups"] = groups;
    return j;
}

inline json to_json(const BoundReport& r) {
    json j;
    j["j"] = r.j;
    j["m"] = r.m;
    j["m_prime"] = r.m_prime;
    j["rank_deficit"] = r.rank_deficit;
    j["trace_value"] = r.trace_value;
    j["n_steps"] = r.n_steps;
    j["r1"] = r.r1;
    j["r2"] = r.r2;
    j["net_radius"] = r.net_radius;
    j["target_eigenvalue"] = r.target;
    j["lambda_j"] = r.lambda_j;
    j["group_tol"] = r.group_tol;
    j["verdicts"] = {{"trace_bound_ok", r.trace_bound_ok},
                     {"interlace_ok", r.interlace_ok},
                     {"final_inequality_ok", r.final_inequality_ok},
                     {"all", r.all_ok()}};
    return j;
}

inline json to_json(const KernelCheckReport& r) {
    json j;
    j["check"] = r.check;
    j["curvature"] = r.curvature;
    if (r.heat_cut > 0.0) j["heat_cut"] = r.heat_cut;
    j["t_grid"] = r.t_grid;
    j["eta_grid"] = r.eta_grid;
    j["log_lhs"] = r.log_lhs;
    j["log_rhs"] = r.log_rhs;
    if (!r.log_kernel.empty()) j["log_kernel"] = r.log_kernel;
    if (r.check == "sandwich") j["fitted_log_c1"] = r.fitted_log_c1;
    j["fitted_log_c0"] = r.fitted_log_c0;
    j["holds"] = r.holds;
    return j;
}

inline json to_json(const ConstructionReport& r) {
    json j;
    j["n"] = r.n;
    j["genus"] = r.genus;
    j["spectrum"] = to_json(r.spectrum);
    j["cdv_spectrum"] = to_json(r.cdv_spectrum);
    j["near_degenerate_count"] = r.near_degenerate_count;
    j["chr_target"] = r.chr_target;
    j["conjecture_disproven"] = cdv_conjecture_target(r.genus).conjecture_disproven;
    j["spectral_ratio"] = r.spectral_ratio;
    return j;
}

inline json to_json(const SuiteResult& r, bool include_runs = false) {
    json j;
    j["name"] = r.name;
    j["seed"] = r.seed;
    j["trials"] = r.runs.size();
    j["aggregate_pass"] = r.aggregate_pass;
    j["worst_metric"] = r.worst_metric;
    if (include_runs) {
        json runs = json::array();
        for (const auto& run : r.runs)
            runs.push_back({{"key", run.key}, {"pass", run.pass}, {"metric", run.metric}});
        j["runs"] = runs;
    } else {
        json failures = json::array();
        for (const auto& run : r.runs)
            if (!run.pass)
                failures.push_back({{"key", run.key}, {"metric", run.metric}});
        j["failures"] = failures;
    }
    return j;
}

/// CSV dump of a grid report: one row per (t, eta) pair, log-domain values.
inline std::string kernel_report_csv(const KernelCheckReport& r) {
    std::string out = "t,eta,log_lhs,log_rhs";
    const bool with_kernel = !r.log_kernel.empty();
    if (with_kernel) out += ",log_kernel";
    out += "\n";
    for (std::size_t i = 0; i < r.log_lhs.size(); ++i) {
        for (std::size_t k = 0; k < r.log_lhs[i].size(); ++k) {
            const double t = i < r.t_grid.size() ? r.t_grid[i] : 0.0;
            const double eta = k < r.eta_grid.size() ? r.eta_grid[k] : static_cast<double>(k);
            out += std::to_string(t) + "," + std::to_string(eta) + "," +
                   std::to_string(r.log_lhs[i][k]) + "," + std::to_string(r.log_rhs[i][k]);
            if (with_kernel) out += "," + std::to_string(r.log_kernel[i][k]);
            out += "\n";
        }
    }
    return out;
}

}  // namespace multispec
