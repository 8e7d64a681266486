#pragma once

#include "besa/operator_spec.hpp"

#include <optional>
#include <string>
#include <vector>

namespace besa {

/// Sum of |a_xy| over y in [x - ceil(c_n<x>^g), x + ceil(n<x>^g)].
double row_l1(const OperatorSpec& spec, Index x);

/// row_l1(x) / <x>^(1 - gamma).
double criterion_ratio(const OperatorSpec& spec, Index x);

/// Threshold for nJ-matrices: the supremal c_* with
/// (c_*/2) [(n+1)^(k0/2) + C_star^3] < 1, i.e. 2 / ((n+1)^(k0/2) + C_star^3).
/// Callers must work strictly below `value`.
struct CStarBound {
    int n = 1;
    double k0 = 3.0;
    double C_star = 1.0;
    double value = 0.0;
};

CStarBound c_star_bound(int n, double k0, double C_star);

enum class Verdict { EsaThmMain, EsaNjThreshold, Inconclusive };

std::string to_string(Verdict v);

struct ShellSummary {
    Index lo = 0;  ///< |x| range
    Index hi = 0;
    Index argmax = 0;  ///< signed x attaining the maximum
    double max_ratio = 0.0;
    std::size_t samples = 0;
};

struct CriterionOptions {
    double k0 = 3.0;
    /// ESA_THM_MAIN additionally needs the outer-shell supremum below this.
    double tail_tolerance = 1.0;
    /// Working threshold is c_star_safety * c_*.
    double c_star_safety = 0.99;
    /// Per-sign cap on rows sampled in one shell; larger shells are strided.
    std::size_t max_samples_per_shell = 4096;
};

struct CriterionReport {
    Index x_max = 0;
    int shell_count = 0;
    std::vector<ShellSummary> shells;
    /// (x, ratio) at the per-shell, per-sign maxima the estimate rests on.
    std::vector<std::pair<Index, double>> ratios;
    double tail_sup = 0.0;
    /// Slope of log(shell max) against log<argmax>. -inf when every shell is zero,
    /// NaN when fewer than two shells are nonzero.
    double trend_exponent = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    /// Distance of tail_sup below the threshold the verdict was judged against.
    double margin = 0.0;
    std::optional<CStarBound> c_star;  ///< set when gamma == 0
    double c_star_working = 0.0;
};

/// Samples the criterion ratio on geometric shells between sqrt(x_max) and x_max,
/// both signs of x, and classifies the limsup behaviour.
CriterionReport estimate_limsup(const OperatorSpec& spec, Index x_max, int shells,
                                const CriterionOptions& options = {});

/// Shell edges |x| in [sqrt(x_max), x_max]; exposed for tests.
std::vector<Index> shell_edges(Index x_max, int shells);

}  // namespace besa
