#pragma once

#include "besa/operator_spec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace besa {

enum class DefectClass { SquareSummable, Divergent, Borderline };

std::string to_string(DefectClass c);

/// u = mantissa * exp(log_scale). The recurrence renormalizes whenever the
/// running magnitude leaves [1e-100, 1e100], so log_scale carries the excess.
struct ScaledValue {
    Complex mantissa{};
    double log_scale = 0.0;

    [[nodiscard]] double log_abs() const { return std::log(std::abs(mantissa)) + log_scale; }
    [[nodiscard]] Complex value() const { return mantissa * std::exp(log_scale); }
};

struct DefectOptions {
    double margin = 0.1;
    /// Fit window [x_max / fit_divisor, x_max].
    Index fit_divisor = 100;
};

/// Candidate defect vector of the one-sided Jacobi counterexample.
struct DefectSolution {
    double growth_exponent = 0.0;
    int shift_sign = 1;  ///< solves A u = shift_sign * i * u
    Index x_max = 0;
    std::vector<ScaledValue> values;  ///< u_1 .. u_{x_max}; u_x = 0 for x <= 0
    std::vector<double> partial_sums;  ///< S_m = sum_{x <= m} |u_x|^2 (may saturate to inf)
    double decay_exponent = 0.0;  ///< mean of the parity fits
    double decay_exponent_even = 0.0;
    double decay_exponent_odd = 0.0;
    DefectClass classification = DefectClass::Borderline;
    int renormalizations = 0;

    [[nodiscard]] ScaledValue at(Index x) const;
};

/// u_1 = 1, u_2 = s i, u_{x+1} = (s i u_x - (x-1)^d u_{x-1}) / x^d for x >= 2, with a
/// least-squares fit of log|u_x| against log x per parity over the fit window.
DefectSolution defect_recurrence(const OperatorSpec& spec, Index x_max, int shift_sign = 1,
                                 const DefectOptions& options = {});

/// Classification rule: 2p > 1 + margin, 2p < 1 - margin, otherwise borderline.
DefectClass classify_exponent(double decay_exponent, double margin);

struct DeficiencyReport {
    DefectSolution plus;
    DefectSolution minus;
    /// (n+, n-) when both shifts agree and are not borderline.
    std::optional<std::pair<int, int>> deficiency_estimate;
    bool esa_consistent = false;
    bool inconclusive = true;
    double partial_sum_tail = 0.0;  ///< S_{x_max} - S_{x_max/2} for the +i solution
};

DeficiencyReport classify_deficiency(const OperatorSpec& spec, Index x_max, const DefectOptions& options = {});

}  // namespace besa
