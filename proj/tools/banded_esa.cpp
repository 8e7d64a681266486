#include "besa/commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace besa;

namespace {

struct Globals {
    std::string spec;
    std::string out;
    bool json = false;
    bool csv = false;
    bool quiet = false;
};

void emit(const Report& r, const Globals& g, bool out_taken) {
    const std::string text = r.to_json().dump(2);
    if (!g.out.empty() && !out_taken) {
        std::ofstream f(g.out);
        if (!f) {
            throw std::runtime_error("cannot write '" + g.out + "'");
        }
        f << text << '\n';
    }
    if (!g.quiet) {
        std::cout << text << '\n';
    }
}

OperatorSpec require_spec(const Globals& g) {
    if (g.spec.empty()) {
        throw CLI::RequiredError("--spec");
    }
    return load_spec(g.spec);
}

Report error_report(const std::string& command, const std::string& what) {
    Report r;
    r.manifest = make_manifest(command, nullptr, Json::object());
    r.status = Status::Error;
    r.violations.push_back(what);
    r.payload = {{"error", what}};
    return r;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Essential self-adjointness diagnostics for banded Hermitian matrices", "banded-esa"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));

    Globals g;
    app.add_option("--spec", g.spec, "operator spec JSON");
    app.add_option("--out", g.out, "output file");
    auto* json_flag = app.add_flag("--json", g.json, "write the JSON report (default)");
    app.add_flag("--csv", g.csv, "write CSV data where the command has any")->excludes(json_flag);
    app.add_flag("--quiet,-q", g.quiet, "suppress stdout");

    auto* crit = app.add_subcommand("check-criterion", "evaluate the row-sum criterion on geometric shells");
    CriterionParams cp;
    crit->add_option("--x-max", cp.x_max)->capture_default_str()->check(CLI::PositiveNumber);
    crit->add_option("--shells", cp.shells)->capture_default_str()->check(CLI::Range(3, 64));
    crit->add_option("--k0", cp.k0)->capture_default_str();
    crit->add_option("--tail-tolerance", cp.tail_tolerance)->capture_default_str();

    auto* solve = app.add_subcommand("solve", "solve (I - s iA) f = g on adaptive finite sections");
    SolveParams sp;
    std::string rhs_path;
    std::string sign_text = "+1";
    solve->add_option("--rhs", rhs_path, "rhs JSON [[x, re, im], ...]")->required();
    solve->add_option("--sign", sign_text)->capture_default_str()->check(CLI::IsMember({"+1", "1", "-1"}));
    solve->add_option("--tol", sp.tol)->capture_default_str();
    solve->add_option("--k", sp.k)->capture_default_str();
    solve->add_option("--max-growth", sp.max_growth)->capture_default_str();

    auto* proof = app.add_subcommand("verify-proof-bounds", "check each inequality of the proof chain");
    ProofParams pp;
    proof->add_option("--k", pp.k)->capture_default_str();
    proof->add_option("--delta", pp.delta)->capture_default_str()->check(CLI::Range(0.0, 1.0));
    proof->add_option("--x-max", pp.x_max)->capture_default_str()->check(CLI::PositiveNumber);
    proof->add_option("--k0", pp.k0)->capture_default_str();
    proof->add_option("--tol", pp.tol)->capture_default_str();

    auto* defect = app.add_subcommand("probe-deficiency", "classify defect solutions of the Jacobi counterexample");
    DeficiencyParams dp;
    double delta = 1.5;
    defect->add_option("--delta", delta, "growth exponent of the off-diagonal")->capture_default_str();
    defect->add_option("--x-max", dp.x_max)->capture_default_str();
    defect->add_option("--margin", dp.margin)->capture_default_str();

    auto* suite = app.add_subcommand("run-suite", "run a suite config and compare against expected statuses");
    std::string suite_path;
    std::vector<std::string> only;
    suite->add_option("config", suite_path, "suite JSON")->required()->check(CLI::ExistingFile);
    suite->add_option("--only", only, "restrict to these commands");

    for (auto* sub : {crit, solve, proof, defect, suite}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        Report r;
        bool out_taken = false;
        if (crit->parsed()) {
            r = check_criterion(require_spec(g), cp);
        } else if (solve->parsed()) {
            sp.sign = sign_text == "-1" ? -1 : 1;
            WindowVector f;
            r = solve_command(require_spec(g), load_rhs(rhs_path), sp, &f);
            if (!g.out.empty()) {
                write_solution_csv(g.out, f);
                std::filesystem::path cert(g.out);
                cert.replace_extension(".certificate.json");
                std::ofstream c(cert);
                c << r.to_json().dump(2) << '\n';
                out_taken = true;
            }
        } else if (proof->parsed()) {
            r = verify_proof_bounds(require_spec(g), pp);
        } else if (defect->parsed()) {
            const OperatorSpec spec = g.spec.empty() ? make_counterexample(delta) : load_spec(g.spec);
            DefectSolution sol;
            r = probe_deficiency(spec, dp, &sol);
            if (g.csv && !g.out.empty()) {
                write_defect_csv(g.out, sol);
                out_taken = true;
            }
        } else {
            SuiteConfig config = load_suite_config(suite_path);
            if (!only.empty()) {
                config.commands = only;
            }
            r = run_suite(config);
        }
        emit(r, g, out_taken);
        return exit_code(r.status);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const SpecError& e) {
        // Malformed input files count as usage errors.
        std::cerr << "banded-esa: " << e.what() << '\n';
        if (!g.quiet) {
            std::cout << error_report(command, e.what()).to_json().dump(2) << '\n';
        }
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "banded-esa: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "banded-esa: internal error: " << e.what() << '\n';
        if (!g.quiet) {
            std::cout << error_report(command, e.what()).to_json().dump(2) << '\n';
        }
        return 3;
    }
}
