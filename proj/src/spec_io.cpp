#include "besa/spec_io.hpp"

#include <fstream>
#include <sstream>

namespace besa {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw SpecError("spec field '" + field + "': " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) {
        fail(path + key, "missing");
    }
    return obj.at(key);
}

double number(const Json& obj, const char* key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_number()) {
        fail(path + key, "must be a number");
    }
    return v.get<double>();
}

double number_or(const Json& obj, const char* key, const std::string& path, double fallback) {
    if (!obj.is_object() || !obj.contains(key)) {
        return fallback;
    }
    return number(obj, key, path);
}

BandProfile parse_profile(const Json& j) {
    const Json& p = require(j, "profile", "");
    const Json& n = require(p, "n", "profile.");
    if (!n.is_number_integer()) {
        fail("profile.n", "must be an integer");
    }
    const double gamma = number(p, "gamma", "profile.");
    if (n.get<long long>() < 1) {
        fail("profile.n", "must be >= 1");
    }
    if (!(gamma >= 0.0 && gamma < 1.0)) {
        fail("profile.gamma", "must lie in [0, 1)");
    }
    return {static_cast<int>(n.get<long long>()), gamma};
}

Index integer_at(const Json& row, std::size_t i, const std::string& path) {
    const Json& v = row.at(i);
    if (!v.is_number_integer()) {
        fail(path, "index must be an integer");
    }
    return v.get<Index>();
}

}  // namespace

OperatorSpec spec_from_json(const Json& j) {
    if (!j.is_object()) {
        fail("<root>", "spec must be a JSON object");
    }
    const BandProfile profile = parse_profile(j);
    const Json& fam = require(j, "family", "");
    if (!fam.is_string()) {
        fail("family", "must be a string");
    }
    const std::string name = fam.get<std::string>();
    const Json params = j.contains("params") ? j.at("params") : Json::object();
    if (!params.is_object()) {
        fail("params", "must be an object");
    }

    if (name == "counterexample") {
        const double d = number(params, "delta", "params.");
        if (!(d > 0.0)) {
            fail("params.delta", "must be positive");
        }
        return make_counterexample(d, profile);
    }
    if (name == "poly_growth_band") {
        return make_poly_growth_band(profile, number(params, "beta", "params."), number_or(params, "scale", "params.", 1.0));
    }
    if (name == "bounded_test") {
        if (!(profile == BandProfile(1, 0.0))) {
            fail("profile", "bounded_test requires n = 1, gamma = 0");
        }
        const double a = number_or(params, "amplitude", "params.", 1.0);
        if (!(a >= 0.0)) {
            fail("params.amplitude", "must be nonnegative");
        }
        return make_bounded_test(a);
    }
    if (name == "diagonal") {
        return make_diagonal(number(params, "value", "params."), number_or(params, "power", "params.", 0.0), profile);
    }
    if (name == "explicit") {
        const Json& list = require(j, "entries", "");
        if (!list.is_array()) {
            fail("entries", "must be an array");
        }
        std::vector<ExplicitEntry> entries;
        entries.reserve(list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "entries[" + std::to_string(i) + "]";
            const Json& row = list[i];
            if (!row.is_array() || row.size() != 4) {
                fail(path, "must be [x, y, re, im]");
            }
            const Index x = integer_at(row, 0, path);
            const Index y = integer_at(row, 1, path);
            if (!row[2].is_number() || !row[3].is_number()) {
                fail(path, "re and im must be numbers");
            }
            if (x > y) {
                fail(path, "explicit entries must satisfy x <= y (the mirror is implied)");
            }
            const Complex v(row[2].get<double>(), row[3].get<double>());
            if (x == y && v.imag() != 0.0) {
                fail(path, "diagonal entries must be real");
            }
            if (static_cast<double>(y - x) > profile.upper_reach(static_cast<double>(x))) {
                std::ostringstream os;
                os << "entry (" << x << ", " << y << ") lies outside the band z <= n<x>^gamma = "
                   << profile.upper_reach(static_cast<double>(x));
                fail(path, os.str());
            }
            entries.push_back({x, y, v});
        }
        return make_explicit(profile, std::move(entries), true);
    }
    fail("family", "unknown family '" + name + "'");
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw SpecError("cannot open '" + path.string() + "'");
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SpecError("'" + path.string() + "' is not valid JSON: " + e.what());
    }
}

OperatorSpec load_spec(const std::filesystem::path& path) { return spec_from_json(read_json_file(path)); }

Json spec_to_json(const OperatorSpec& spec) {
    Json j;
    j["profile"] = {{"n", spec.profile().n()}, {"gamma", spec.profile().gamma()}};
    j["family"] = family_name(spec.family());
    std::visit(
        [&j](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, family::Counterexample>) {
                j["params"] = {{"delta", f.growth_exponent}};
            } else if constexpr (std::is_same_v<T, family::PolyGrowthBand>) {
                j["params"] = {{"beta", f.beta}, {"scale", f.scale}};
            } else if constexpr (std::is_same_v<T, family::BoundedTest>) {
                j["params"] = {{"amplitude", f.amplitude}};
            } else if constexpr (std::is_same_v<T, family::Diagonal>) {
                j["params"] = {{"value", f.value}, {"power", f.power}};
            } else if constexpr (std::is_same_v<T, family::Explicit>) {
                if (!f.mirrored) {
                    throw SpecError("spec_to_json: only mirrored explicit specs are serializable");
                }
                Json list = Json::array();
                for (const auto& e : f.entries) {
                    list.push_back({e.x, e.y, e.value.real(), e.value.imag()});
                }
                j["entries"] = std::move(list);
            } else {
                throw SpecError("spec_to_json: derived spec '" + f.description + "' has no JSON form");
            }
        },
        spec.family());
    return j;
}

std::string emit_spec(const OperatorSpec& spec) { return spec_to_json(spec).dump(); }

SparseVector rhs_from_json(const Json& j) {
    if (!j.is_array() || j.empty()) {
        throw SpecError("rhs: must be a non-empty array of [x, re, im]");
    }
    SparseVector g;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const Json& row = j[i];
        const std::string path = "rhs[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 3 || !row[0].is_number_integer() || !row[1].is_number() ||
            !row[2].is_number()) {
            throw SpecError(path + ": must be [x, re, im] with integer x");
        }
        g[row[0].get<Index>()] += Complex(row[1].get<double>(), row[2].get<double>());
    }
    return g;
}

SparseVector load_rhs(const std::filesystem::path& path) { return rhs_from_json(read_json_file(path)); }

}  // namespace besa
