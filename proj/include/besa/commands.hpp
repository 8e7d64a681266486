#pragma once

#include "besa/criterion.hpp"
#include "besa/deficiency.hpp"
#include "besa/finite_section.hpp"
#include "besa/proof_diagnostics.hpp"
#include "besa/report.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace besa {

struct CriterionParams {
    Index x_max = 10'000;
    int shells = 8;
    double k0 = 3.0;
    double tail_tolerance = 1.0;
};

Report check_criterion(const OperatorSpec& spec, const CriterionParams& params);

struct SolveParams {
    int sign = 1;
    double tol = 1e-8;
    double k = 2.0;
    int max_growth = 24;
};

/// When `solution` is non-null it receives the computed f.
Report solve_command(const OperatorSpec& spec, const SparseVector& g, const SolveParams& params,
                     WindowVector* solution = nullptr);

struct ProofParams {
    double k = 2.0;
    double delta = 0.5;
    Index x_max = 10'000;
    double k0 = 3.0;  ///< exponent for the nJ bracket sweep
    double tol = 1e-8;
};

Report verify_proof_bounds(const OperatorSpec& spec, const ProofParams& params);

struct DeficiencyParams {
    Index x_max = 10'000;
    double margin = 0.1;
};

/// When `dump` is non-null it receives the +i defect solution.
Report probe_deficiency(const OperatorSpec& spec, const DeficiencyParams& params, DefectSolution* dump = nullptr);

/// Suite configuration:
///   {"runs": [{"name": "...", "command": "criterion|solve|proof-bounds|deficiency",
///              "spec": "path", "rhs": "path", "params": {...}, "expect": "ok"}]}
/// Relative paths resolve against `base_dir`. `commands` filters the runs; an empty
/// filter selects nothing.
struct SuiteConfig {
    Json runs = Json::array();
    std::filesystem::path base_dir;
    std::vector<std::string> commands{"criterion", "solve", "proof-bounds", "deficiency"};
};

SuiteConfig load_suite_config(const std::filesystem::path& path);

/// Runs the selected commands and reports ok iff every run matched its expected
/// status. Throws std::invalid_argument("no commands selected") for an empty selection.
Report run_suite(const SuiteConfig& config);

/// CSV writers; doubles at 17 significant digits.
void write_solution_csv(const std::filesystem::path& path, const WindowVector& f);
void write_defect_csv(const std::filesystem::path& path, const DefectSolution& sol);

}  // namespace besa
