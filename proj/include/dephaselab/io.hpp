#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "dephaselab/dephase.hpp"
#include "dephaselab/discrimination.hpp"
#include "dephaselab/fock.hpp"
#include "dephaselab/linop.hpp"
#include "dephaselab/metrics.hpp"
#include "dephaselab/naimark.hpp"
#include "dephaselab/search.hpp"

namespace dephaselab::io {

using nlohmann::json;

// State files: {"n_modes": int, "terms": [{"pattern": [int...], "re": f,
// "im": f}]} or {"coherent": {"alphas": [[re, im]...], "tail_tol": f}}.
PureState state_from_json(const json& j);
json state_to_json(const PureState& s);

// Circuit files: {"dim": int, "rows": [[[re, im], ...] ...]}.
LinearCircuit circuit_from_json(const json& j);
json circuit_to_json(const LinearCircuit& c);

// Givens files: {"dim": int, "angles": [...], "phases": [...]}.
GivensParameterization givens_from_json(const json& j);
json givens_to_json(const GivensParameterization& g);

// POVM files: {"signal_dim": int, "elements": [{"vec": [[re, im]...]}]}.
PovmSet povm_from_json(const json& j);
json povm_to_json(const PovmSet& p);

// Search config: the SearchConfig fields verbatim.
SearchConfig search_config_from_json(const json& j);
json search_config_to_json(const SearchConfig& c);

json usd_report_to_json(const UsdReport& r);
json fidelity_bounds_to_json(const FidelityBoundsReport& r);
json classification_to_json(const PatternClassification& c);
json condition_report_to_json(const ConditionReport& r);
json search_result_to_json(const SearchResult& r);
json block_mixture_to_json(const BlockMixture& b);

// CSV emitters. Mode indices in reports are 1-based.
std::string distribution_csv(const DiagonalMixture& mix);
std::string condition_report_csv(const ConditionReport& r);
std::string sweep_csv(const std::vector<AncillaSweepEntry>& rows);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
PureState read_state_file(const std::string& path);
LinearCircuit read_circuit_file(const std::string& path);
PovmSet read_povm_file(const std::string& path);
SearchConfig read_search_config_file(const std::string& path);

}  // namespace dephaselab::io
