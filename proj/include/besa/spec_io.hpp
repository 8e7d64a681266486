#pragma once

#include "besa/finite_section.hpp"
#include "besa/operator_spec.hpp"

#include <filesystem>
#include <json.hpp>
#include <string>

namespace besa {

using Json = nlohmann::json;

/// Parses the JSON spec format:
///   {"profile": {"n": 1, "gamma": 0.0}, "family": "counterexample", "params": {"delta": 1.5}}
///   {"profile": {...}, "family": "explicit", "entries": [[x, y, re, im], ...]}
/// Throws SpecError naming the offending field.
OperatorSpec spec_from_json(const Json& j);
OperatorSpec load_spec(const std::filesystem::path& path);

/// Canonical JSON for a spec; throws SpecError for derived specs.
Json spec_to_json(const OperatorSpec& spec);
std::string emit_spec(const OperatorSpec& spec);

/// rhs format: [[x, re, im], ...]. Duplicate indices are summed.
SparseVector rhs_from_json(const Json& j);
SparseVector load_rhs(const std::filesystem::path& path);

Json read_json_file(const std::filesystem::path& path);

}  // namespace besa
