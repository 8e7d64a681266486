#include "besa/report.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace besa {

std::string to_string(Status s) {
    switch (s) {
        case Status::Ok: return "ok";
        case Status::Violation: return "violation";
        case Status::Inconclusive: return "inconclusive";
        case Status::Error: return "error";
    }
    return "error";
}

Status status_from_string(std::string_view s) {
    if (s == "ok") return Status::Ok;
    if (s == "violation") return Status::Violation;
    if (s == "inconclusive") return Status::Inconclusive;
    if (s == "error") return Status::Error;
    throw std::invalid_argument("unknown status '" + std::string(s) + "'");
}

int exit_code(Status s) {
    switch (s) {
        case Status::Ok:
        case Status::Inconclusive: return 0;
        case Status::Violation: return 1;
        case Status::Error: return 3;
    }
    return 3;
}

Json Report::to_json() const {
    Json j;
    j["manifest"] = {{"command", manifest.command},
                     {"spec_digest", manifest.spec_digest},
                     {"parameters", manifest.parameters},
                     {"timestamp", manifest.timestamp},
                     {"tool_version", manifest.tool_version}};
    j["status"] = to_string(status);
    j["violations"] = violations;
    j["payload"] = payload;
    return j;
}

std::string fnv1a_hex(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string spec_digest(const OperatorSpec& spec) {
    if (std::holds_alternative<family::Derived>(spec.family())) {
        return fnv1a_hex(spec.describe());
    }
    return fnv1a_hex(emit_spec(spec));
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunManifest make_manifest(std::string command, const OperatorSpec* spec, Json parameters) {
    RunManifest m;
    m.command = std::move(command);
    m.spec_digest = spec != nullptr ? spec_digest(*spec) : fnv1a_hex("");
    m.parameters = std::move(parameters);
    m.timestamp = utc_timestamp();
    return m;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace besa
