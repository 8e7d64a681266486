#include "besa/commands.hpp"

#include <doctest.h>

#include <fstream>

using namespace besa;

namespace {

std::filesystem::path fixture(const char* name) { return std::filesystem::path(BESA_FIXTURE_DIR) / name; }

bool same_entries(const OperatorSpec& a, const OperatorSpec& b) {
    for (Index x = -30; x <= 30; ++x) {
        for (Index y = x - 6; y <= x + 6; ++y) {
            if (a.entry(x, y) != b.entry(x, y)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_SUITE("cli-report") {

TEST_CASE("load_spec accepts the counterexample schema") {
    const OperatorSpec s = spec_from_json(
        Json::parse(R"({"profile":{"n":1,"gamma":0.0},"family":"counterexample","params":{"delta":1.5}})"));
    CHECK(s.entry(4, 5) == Complex(8.0, 0.0));
}

TEST_CASE("schema errors name the field") {
    auto message = [](const char* text) {
        try {
            spec_from_json(Json::parse(text));
        } catch (const SpecError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message(R"({"profile":{"n":1,"gamma":1.0},"family":"counterexample","params":{"delta":1.5}})")
              .find("profile.gamma") != std::string::npos);
    CHECK(message(R"({"profile":{"n":1,"gamma":0.0},"family":"explicit","entries":[[0,5,1.0,0.0]]})")
              .find("entries[0]") != std::string::npos);
    CHECK(message(R"({"profile":{"n":1,"gamma":0.0},"family":"counterexample"})").find("params.delta") !=
          std::string::npos);
    CHECK(message(R"({"profile":{"n":1,"gamma":0.0},"family":"nope"})").find("family") != std::string::npos);
    CHECK(message(R"({"profile":{"n":0,"gamma":0.0},"family":"diagonal","params":{"value":1}})")
              .find("profile.n") != std::string::npos);
}

TEST_CASE("emit/load round trip") {
    const std::vector<OperatorSpec> specs = {
        make_counterexample(1.5), make_poly_growth_band(BandProfile(2, 0.3), -0.4, 2.0), make_bounded_test(3.0),
        make_diagonal(2.0, 0.5),
        make_explicit(BandProfile(1, 0.0), {{0, 1, Complex(1, -2)}, {3, 3, Complex(4, 0)}, {-2, -1, Complex(0, 1)}})};
    for (const auto& s : specs) {
        const OperatorSpec back = spec_from_json(Json::parse(emit_spec(s)));
        CHECK(same_entries(s, back));
        CHECK(back.profile() == s.profile());
        CHECK(spec_digest(back) == spec_digest(s));
    }
}

TEST_CASE("rhs parsing") {
    const SparseVector g = rhs_from_json(Json::parse("[[0, 1.0, 0.0], [3, 0.5, -1.0], [0, 1.0, 1.0]]"));
    CHECK(g.at(0) == Complex(2.0, 1.0));
    CHECK(g.at(3) == Complex(0.5, -1.0));
    CHECK_THROWS_AS(rhs_from_json(Json::parse("[]")), SpecError);
    CHECK_THROWS_AS(rhs_from_json(Json::parse("[[0.5, 1, 0]]")), SpecError);
}

TEST_CASE("status and exit codes") {
    CHECK(exit_code(Status::Ok) == 0);
    CHECK(exit_code(Status::Inconclusive) == 0);
    CHECK(exit_code(Status::Violation) == 1);
    CHECK(exit_code(Status::Error) == 3);
    for (Status s : {Status::Ok, Status::Violation, Status::Inconclusive, Status::Error}) {
        CHECK(status_from_string(to_string(s)) == s);
    }
    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("reports: ok implies no violations, payload reproducible") {
    const OperatorSpec s = load_spec(fixture("poly_band.json"));
    const Report a = check_criterion(s, {});
    const Report b = check_criterion(s, {});
    CHECK(a.status == Status::Ok);
    CHECK(a.violations.empty());
    CHECK(a.payload.dump() == b.payload.dump());
    CHECK(a.manifest.spec_digest == b.manifest.spec_digest);
    const Json j = a.to_json();
    for (const char* key : {"manifest", "status", "violations", "payload"}) {
        CHECK(j.contains(key));
    }
    CHECK(j["manifest"]["tool_version"] == kToolVersion);
}

TEST_CASE("solve command") {
    WindowVector f;
    const Report r = solve_command(load_spec(fixture("diagonal.json")), load_rhs(fixture("rhs_e0.json")), {}, &f);
    CHECK(r.status == Status::Ok);
    CHECK(std::abs(f.at(0) - Complex(0.2, 0.4)) < 1e-12);
    CHECK(r.payload["converged"] == true);
}

TEST_CASE("proof bounds command") {
    ProofParams p;
    p.k = 1.0;
    const Report r = verify_proof_bounds(load_spec(fixture("bounded.json")), p);
    CHECK(r.status == Status::Ok);
    for (const auto& c : r.payload["checks"]) {
        CHECK(c.contains("paper_eq"));
        CHECK(c["status"] == "pass");
    }
}

TEST_CASE("deficiency command statuses") {
    CHECK(probe_deficiency(make_counterexample(1.5), {}).status == Status::Violation);
    CHECK(probe_deficiency(make_counterexample(0.5), {}).status == Status::Ok);
}

TEST_CASE("suite") {
    SuiteConfig config = load_suite_config(fixture("suite.json"));
    const Report r = run_suite(config);
    CHECK(r.status == Status::Ok);
    for (const auto& run : r.payload["runs"]) {
        CHECK(run["matched"] == true);
    }

    config.commands = {"criterion", "deficiency"};
    const Report sub = run_suite(config);
    for (const auto& run : sub.payload["runs"]) {
        const std::string name = run["name"];
        if (name == "criterion-counterexample") {
            CHECK(run["status"] == "inconclusive");
        }
        if (name == "deficiency-counterexample") {
            CHECK(run["status"] == "violation");
        }
    }

    config.commands.clear();
    try {
        run_suite(config);
        FAIL("expected an error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()) == "no commands selected");
    }
}

TEST_CASE("csv writers use 17 digits") {
    const auto dir = std::filesystem::temp_directory_path() / "besa_csv_test";
    std::filesystem::create_directories(dir);
    WindowVector f(Window(0, 1));
    f.values = {Complex(0.1, 0.0), Complex(1.0 / 3.0, -2.0)};
    write_solution_csv(dir / "f.csv", f);
    std::ifstream in(dir / "f.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "x,re,im,abs");
    CHECK(row == "0,0.10000000000000001,0,0.10000000000000001");
    std::filesystem::remove_all(dir);
}

}  // TEST_SUITE
