#pragma once
// Trace serialization: a CSV with one row per iterate for plotting, and a
// JSON run summary that echoes the full configuration so a run can be
// reproduced from the summary alone. All floating-point values are printed
// with %.17g so round-tripping is exact.

#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "ncn/optimizer.hpp"

namespace ncn {

inline void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << "k,f,grad_norm,min_hess_eig,step_size,n_backtracks,noise_injected,n_noise_draws,"
           "neg_proj_norm,pos_proj_norm\n";
    char buf[512];
    for (const IterationRecord& r : trace.records) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%zu,%d,%zu,%.17g,%.17g\n",
                      r.k, r.f_value, r.grad_norm, r.min_hess_eig, r.step_size, r.n_backtracks,
                      r.noise_injected ? 1 : 0, r.n_noise_draws, r.neg_proj_norm,
                      r.pos_proj_norm);
        out << buf;
    }
}

inline std::string trace_csv_string(const RunTrace& trace) {
    std::ostringstream out;
    write_trace_csv(out, trace);
    return out.str();
}

inline nlohmann::json run_summary_json(const RunTrace& trace, double wall_time_seconds,
                                       std::uint64_t seed, const nlohmann::json& config_echo) {
    const IterationRecord& last = trace.records.back();
    nlohmann::json j;
    j["termination"] = to_string(trace.termination);
    j["final_f"] = last.f_value;
    j["final_grad_norm"] = last.grad_norm;
    j["final_min_hess_eig"] = last.min_hess_eig;
    j["iterations"] = trace.records.size() - 1;
    j["projection_basis"] = trace.projection_basis;
    j["wall_time_seconds"] = wall_time_seconds;
    j["seed"] = seed;
    j["config"] = config_echo;
    return j;
}

}  // namespace ncn
