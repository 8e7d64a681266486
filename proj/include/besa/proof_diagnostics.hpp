#pragma once

#include "besa/finite_section.hpp"
#include "besa/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace besa {

// Lipschitz bound |t_x - t_y| <= |<x>^k - <y>^k|.

struct LipschitzViolation {
    Index x = 0;
    Index y = 0;
    double lhs = 0.0;
    double rhs = 0.0;
};

struct LipschitzReport {
    IndexRange range;
    Index max_separation = 0;
    std::size_t pairs_checked = 0;
    double min_slack = 0.0;  ///< smallest rhs - lhs seen
    std::vector<LipschitzViolation> violations;

    [[nodiscard]] bool passed() const { return violations.empty(); }
};

/// All pairs x, y in range with |x - y| <= max_separation.
LipschitzReport check_weight_lipschitz(const WeightProfile& weights, IndexRange range, Index max_separation);

// Row smallness.

/// Sum over the band of row x of |a_xy| |<y>^k/<x>^k - 1|.
double weighted_row_sum(const OperatorSpec& spec, Index x, double k);
/// Sum over the band of row y of |a_xy| (<x>^k/<y>^k) |<x>^k/<y>^k - 1|.
double weighted_row_sum_dual(const OperatorSpec& spec, Index y, double k);

struct SmallnessProbe {
    Index x = 0;  ///< probed |x|; both signs are evaluated
    double sum = 0.0;
    double dual_sum = 0.0;
};

struct SmallnessOptions {
    Index horizon = 100'000;
    int samples_per_decade = 32;
    /// Y used for the gauge measurement is y_factor * X.
    double y_factor = 4.0;
};

struct SmallnessResult {
    bool found = false;
    double delta = 0.5;
    double k = 1.0;
    Index horizon = 0;
    double threshold = 0.0;  ///< delta / (c_n+1)^(k/2)
    double dual_threshold = 0.0;  ///< delta / C_star^3 at the returned X
    double X_bar = 0.0;  ///< smallest probed |x| beyond which both sums stay below threshold
    double X = 0.0;  ///< weight parameter with X - c_n<X>^gamma = X_bar
    double Y = 0.0;
    double C_star = 1.0;
    /// Largest sum/threshold ratio among probes at or beyond X_bar (or overall when
    /// not found).
    double worst_ratio = 0.0;
    std::vector<SmallnessProbe> probes;
};

/// Searches geometric probe points 1 .. horizon for the smallest X_bar past which
/// the row sums stay below delta/(c_n+1)^(k/2) and the dual sums below
/// delta/C_star^3, C_star measured from the weight built at that X_bar.
SmallnessResult weighted_row_smallness(const OperatorSpec& spec, double delta, double k,
                                       const SmallnessOptions& options = {});

/// X with X - c_n<X>^gamma = X_bar (smallest such X found by bisection).
double weight_X_for_inner_edge(double X_bar, const BandProfile& band);

// Commutator split.

struct CommutatorSplit {
    double I1 = 0.0;
    double I2 = 0.0;
    double weighted_norm_sq = 0.0;  ///< ||T f||^2
    /// Effective margin (I1 + I2) / ||T f||^2.
    double delta_margin = 0.0;
    /// <Tf, [T,A] f> assembled as sum_x sum_y a_yx (t_x - t_y) t_x f_x conj(f_y).
    Complex form_bilinear{};
    /// <Tf, [T,A] f> assembled from T(Af) - A(Tf) on the section.
    Complex form_direct{};
    /// <Tf, A Tf>; real for Hermitian sections.
    Complex symmetric_form{};
    double symmetric_scale = 0.0;  ///< sum |t_x f_x| |a_xy| |t_y f_y|
    double X_bar = 0.0;
    double Y_bar = 0.0;

    [[nodiscard]] bool young_holds(double rel_tol = 1e-10) const;
    [[nodiscard]] double identity_error() const;  ///< relative mismatch of the two assemblies
    [[nodiscard]] double real_part_residual() const;  ///< |Im <Tf, A Tf>| / symmetric_scale
};

/// Inner products are linear in the first slot: <u, v> = sum u_x conj(v_x).
CommutatorSplit commutator_split(const BandedSection& section, const WindowVector& f, const WeightProfile& weights,
                                 const BandProfile& band);

// A-priori weighted bound.

struct AprioriStep {
    double Y = 0.0;
    double norm_Tf = 0.0;
    double norm_Tg = 0.0;
    double ratio = 0.0;  ///< ||Tf|| / ||Tg||
    double bound = 0.0;  ///< 1 / (1 - delta)
    bool passed = false;
};

struct AprioriReport {
    double delta = 0.5;
    double X = 0.0;
    double k = 0.0;
    std::vector<AprioriStep> steps;

    [[nodiscard]] bool passed() const;
    [[nodiscard]] double worst_ratio() const;
};

/// Checks ||Tf|| <= ||Tg|| / (1 - delta) with T built from (k, X, Y) for each Y in
/// the ladder. f and g are read on their own windows (zero outside).
AprioriReport apriori_bound_check(const WindowVector& f, const WindowVector& g, double k, double X,
                                  double delta, const std::vector<double>& Y_ladder);

/// Y ladder Y0, 2 Y0, 4 Y0, ... up to and including y_max.
std::vector<double> doubling_ladder(double Y0, double y_max);

// Bracket-ratio sweep for nJ-matrices.

struct BracketSweepReport {
    int n = 1;
    double k0 = 3.0;
    double C = 0.0;  ///< constant tested: |(<x+m>/<x>)^k0 - 1| <= C / <x>
    Index x_max = 0;
    double worst_ratio = 0.0;  ///< max of <x> |(<x+m>/<x>)^k0 - 1| / C
    Index witness_x = 0;
    Index witness_m = 0;

    [[nodiscard]] bool passed() const { return worst_ratio <= 1.0; }
};

/// Sweeps 1 <= |x| <= x_max, |m| <= n with C = 3 k0 n.
BracketSweepReport bracket_ratio_sweep(int n, double k0, Index x_max);

}  // namespace besa
