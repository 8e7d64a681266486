#pragma once

#include "besa/operator_spec.hpp"

#include <vector>

namespace besa {

/// Clamped polynomial weight t_x: <X>^k inside |x| < X, <x>^k on the ramp
/// X <= |x| <= Y, and <Y>^k beyond Y.
class WeightProfile {
public:
    WeightProfile(double k, double X, double Y);

    [[nodiscard]] double k() const { return k_; }
    [[nodiscard]] double X() const { return X_; }
    [[nodiscard]] double Y() const { return Y_; }

    [[nodiscard]] double t(double x) const;
    [[nodiscard]] WeightProfile with_Y(double Y) const { return {k_, X_, Y}; }

private:
    double k_;
    double X_;
    double Y_;
};

struct WeightSample {
    Index x = 0;
    double t = 0.0;
};

std::vector<WeightSample> weight_values(const WeightProfile& profile, IndexRange range);

/// Inner edge X - c_n<X>^gamma of the region where t varies across a row.
double inner_edge(const WeightProfile& weights, const BandProfile& band);
/// Outer edge Y + c_n<Y>^gamma.
double outer_edge(const WeightProfile& weights, const BandProfile& band);

struct GaugeWitness {
    Index x = 0;
    double ratio = 0.0;
    double bound = 0.0;
};

struct GaugeConstants {
    double c_n_plus_one_pow = 1.0;  ///< (c_n + 1)^(k/2)
    double C_star = 1.0;            ///< max of t/<x>^k and <x>^k/t over the extended window
    Index C_star_witness = 0;
    IndexRange extended;  ///< |x| range the gauge was measured on
    IndexRange ramp;      ///< |x| range where <x>^k/t <= (c_n+1)^(k/2) is asserted
    double max_ramp_ratio = 0.0;
    std::size_t violation_count = 0;
    std::vector<GaugeWitness> violations;  ///< first few witnesses only

    [[nodiscard]] bool passed() const { return violation_count == 0; }
};

/// Measures the gauge constants of a weight against a band profile. Both signs of
/// x are covered by evenness of t and <.>.
GaugeConstants gauge_constants(const WeightProfile& weights, const BandProfile& band);

}  // namespace besa
