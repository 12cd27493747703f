#pragma once

#include <string>

#include <json.hpp>

#include "radcom/balancing_result.hpp"
#include "radcom/dpc_sumrate.hpp"
#include "radcom/model.hpp"

namespace radcom {

/// Complex matrices serialize as {"rows", "cols", "entries"} with entries a
/// row-major array of [re, im] pairs.
nlohmann::json matrix_to_json(const CMat& m);
CMat matrix_from_json(const nlohmann::json& j);

nlohmann::json effective_channel_to_json(const EffectiveChannel& chan);
EffectiveChannel effective_channel_from_json(const nlohmann::json& j);

nlohmann::json precoders_to_json(const Precoders& prec);
Precoders precoders_from_json(const nlohmann::json& j);

/// Convergence traces as plot-ready CSV.
void write_tbf_trace_csv(const BalancingResult& result, const std::string& path);
void write_dpc_trace_csv(const BalancingResult& result, const std::string& path);
void write_saddle_trace_csv(const SaddlePoint& saddle, const std::string& path);

}  // namespace radcom
