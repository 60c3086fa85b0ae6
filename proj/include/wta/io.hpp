#pragma once

#include "wta/analysis.hpp"
#include "wta/graph.hpp"
#include "wta/integrate.hpp"
#include "wta/optimize.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace wta {

using Json = nlohmann::json;

inline constexpr const char* kVersion = WTA_VERSION;

/// 17 significant digits, enough to round-trip any double.
std::string format_number(double v);

/// {"n": int, "edges": [[i, j, w], ...]} with i < j in every entry.
/// Schema violations throw ParseError; graph violations throw the same
/// codes as the Graph constructor.
Graph graph_from_json(const Json& j);
Json graph_to_json(const Graph& g);

StateVector state_from_json(const Json& j);
IntegratorOptions options_from_json(const Json& j);
Json options_to_json(const IntegratorOptions& o);
std::optional<InteractionSpec> interaction_from_json(const Json& j);

Json to_json(const NodeSet& s);
Json to_json(const EquilibriumReport& r);
Json to_json(const SpectrumReport& r);
Json to_json(const ConservationAudit& a);
Json to_json(const EscapeReport& r);
Json to_json(const InteractionReport& r);
/// {"alpha", "best_mask" (bit string), "best_value", "evaluations", "table", ...}
Json to_json(const OptimizeResult& r);

/// Header t,x_0,...,x_{n-1},mass,entropy,max,min,residual.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// Header x_alpha0,mask,final_value.
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);

/// FNV-1a of a compact dump, as 16 hex digits.
std::string hash_hex(const std::string& text);

Json parse_json_file(const std::string& path);

} // namespace wta
