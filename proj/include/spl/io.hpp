#pragma once

#include <string>

#include "json.hpp"  // vendored nlohmann/json

#include "spl/diagnostics.hpp"
#include "spl/problem.hpp"
#include "spl/regularizer.hpp"
#include "spl/solver.hpp"

namespace spl {

/// Formats a double with enough digits to round-trip exactly.
std::string format_double(double value);

/// Dataset CSV: header x1..xD,y; one sample per row; entries must be finite.
Dataset load_dataset_csv(const std::string& path);
void save_dataset_csv(const Dataset& dataset, const std::string& path);

/// Tabulated weighting rule CSV: header l,v; strictly increasing l.
Regularizer load_tabulated_csv(double pace, const std::string& path);

/// Trace CSV: header k,E,G,U,grad_norm,eps_k,r_k,step_norm,inner_iters.
/// The sidecar JSON summary is {iters, converged, final_G, final_grad_norm}.
void save_trace_csv(const IterateTrace& trace, const std::string& path);
IterateTrace load_trace_csv(const std::string& path);
nlohmann::json trace_summary_json(const IterateTrace& trace);
void save_trace_summary(const IterateTrace& trace, const std::string& path);

nlohmann::json condition_report_json(const ConditionReport& report);
nlohmann::json certification_report_json(const CertificationReport& report);

void write_json_file(const nlohmann::json& value, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace spl
