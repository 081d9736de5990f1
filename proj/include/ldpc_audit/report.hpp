#pragma once

#include <string>

#include <json.hpp>

#include "ldpc_audit/circuit.hpp"
#include "ldpc_audit/counterexample.hpp"
#include "ldpc_audit/decompose.hpp"
#include "ldpc_audit/experiments.hpp"
#include "ldpc_audit/peel.hpp"

namespace ldpc_audit {

/// Reports use 1-based row and column numbers throughout and carry
/// "schema_version".
inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const ChoicePolicy& policy);
nlohmann::json to_json(const PeelTrace& trace);
nlohmann::json to_json(const FinderResult& result);
nlohmann::json to_json(const DecompositionReport& report, const BitMatrix& input);
nlohmann::json to_json(const Circuit& circuit);
nlohmann::json to_json(const EncoderVerdict& verdict);
nlohmann::json to_json(const LemmaReport& report);
nlohmann::json to_json(const TheoremReport& report);
nlohmann::json to_json(const EnsembleResult& result, bool include_timing = false);

/// Inverse of to_json(Circuit); throws FormatError on malformed input and
/// WiringError when the gates are not topologically ordered.
Circuit circuit_from_json(const nlohmann::json& j);

/// The policy replaying the hand-picked choices on the 9x18 instance:
/// rows 1..6, then rows 7 and 9.
ChoicePolicy m18_replay_policy();

/// Readable step-by-step account of a decomposition.
std::string trace_text(const BitMatrix& input, const DecompositionReport& report);

/// Compact 1-based rendering of an index list, e.g. "1-6, 9".
std::string format_indices(const std::vector<std::size_t>& zero_based);

}  // namespace ldpc_audit
