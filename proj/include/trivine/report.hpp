#pragma once

// Result documents (JSON) and aligned text tables.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "trivine/compare.hpp"
#include "trivine/simstudy.hpp"

namespace trivine {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFitSchema = "trivine.fit-report";
inline constexpr const char* kSimSchema = "trivine.sim-report";
inline constexpr int kSchemaVersion = 1;

Json spec_json(const ModelSpec& spec);
Json vuong_json(const VuongResult& v);

// One result entry; vuong vs the baseline is attached when given.
Json fit_result_json(const FitResult& fit, std::optional<int> rank, const FitResult* baseline);

// Throws std::logic_error if any result's aic differs from
// -2 loglik + 2 n_params recomputed from the document.
void check_aic_consistency(const Json& document);

// Tables grouped by (permutation, margin); one column per model.
std::string fit_text_report(const std::vector<RankedFit>& results, const FitResult* baseline);

Json sim_report_json(const SimReport& report);
std::string sim_text_report(const SimReport& report);

// printf %.6g
std::string format_g6(double x);

}  // namespace trivine
