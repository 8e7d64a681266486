#pragma once

#include "besa/spec_io.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace besa {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Status { Ok, Violation, Inconclusive, Error };

std::string to_string(Status s);
Status status_from_string(std::string_view s);

/// Process exit code: 0 ok or inconclusive, 1 violation, 3 error.
int exit_code(Status s);

struct RunManifest {
    std::string command;
    std::string spec_digest;  ///< FNV-1a 64 of the canonical spec JSON, hex
    Json parameters = Json::object();
    std::string timestamp;
    std::string tool_version = kToolVersion;
};

struct Report {
    RunManifest manifest;
    Json payload = Json::object();
    Status status = Status::Ok;
    std::vector<std::string> violations;

    [[nodiscard]] Json to_json() const;
};

std::string fnv1a_hex(std::string_view bytes);

/// Digest of the canonical JSON form, or of the description for derived specs.
std::string spec_digest(const OperatorSpec& spec);

/// UTC, ISO 8601 with second resolution.
std::string utc_timestamp();

RunManifest make_manifest(std::string command, const OperatorSpec* spec, Json parameters);

/// Doubles are written with 17 significant digits.
std::string format_double(double v);

}  // namespace besa
