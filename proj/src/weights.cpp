#include "besa/weights.hpp"

namespace besa {

WeightProfile::WeightProfile(double k, double X, double Y) : k_(k), X_(X), Y_(Y) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw std::invalid_argument("weight profile: k must be positive");
    }
    if (!(X > 0.0) || !std::isfinite(X)) {
        throw std::invalid_argument("weight profile: X must be positive");
    }
    if (!(Y > X) || !std::isfinite(Y)) {
        throw std::invalid_argument("weight profile: Y must exceed X");
    }
}

double WeightProfile::t(double x) const {
    const double a = std::abs(x);
    if (a < X_) {
        return bracket_pow(X_, k_);
    }
    if (a <= Y_) {
        return bracket_pow(a, k_);
    }
    return bracket_pow(Y_, k_);
}

std::vector<WeightSample> weight_values(const WeightProfile& profile, IndexRange range) {
    std::vector<WeightSample> out;
    out.reserve(static_cast<std::size_t>(range.size()));
    for (Index x = range.lo; x <= range.hi; ++x) {
        out.push_back({x, profile.t(static_cast<double>(x))});
    }
    return out;
}

double inner_edge(const WeightProfile& weights, const BandProfile& band) {
    return weights.X() - band.lower_reach(weights.X());
}

double outer_edge(const WeightProfile& weights, const BandProfile& band) {
    return weights.Y() + band.lower_reach(weights.Y());
}

namespace {

// Exhaustive below this many points; beyond it the sweep strides and always
// includes the branch edges, where the monotone ratios attain their extremes.
constexpr Index kExhaustiveGauge = 4'000'000;
constexpr std::size_t kMaxWitnesses = 64;

std::vector<Index> gauge_points(Index lo, Index hi, const WeightProfile& w) {
    std::vector<Index> pts;
    if (hi < lo) {
        return pts;
    }
    const Index count = hi - lo + 1;
    const Index stride = count <= kExhaustiveGauge ? 1 : (count + kExhaustiveGauge - 1) / kExhaustiveGauge;
    for (Index x = lo; x <= hi; x += stride) {
        pts.push_back(x);
    }
    if (stride > 1) {
        for (double edge : {w.X(), w.Y()}) {
            for (Index x : {static_cast<Index>(std::floor(edge)) - 1, static_cast<Index>(std::floor(edge)),
                            static_cast<Index>(std::ceil(edge)), static_cast<Index>(std::ceil(edge)) + 1}) {
                if (x >= lo && x <= hi) {
                    pts.push_back(x);
                }
            }
        }
        pts.push_back(hi);
    }
    return pts;
}

}  // namespace

GaugeConstants gauge_constants(const WeightProfile& weights, const BandProfile& band) {
    GaugeConstants g;
    const double k = weights.k();
    g.c_n_plus_one_pow = std::pow(band.c_n() + 1.0, k / 2.0);

    const double x_bar = inner_edge(weights, band);
    const double y_bar = outer_edge(weights, band);
    const double ext_lo = x_bar - band.lower_reach(x_bar);
    const double ext_hi = y_bar + band.lower_reach(y_bar);

    // Sums run over integers ceil(lo) .. floor(hi); negative lower edges mean the
    // window reaches through the origin.
    g.extended = {std::max<Index>(0, static_cast<Index>(std::ceil(ext_lo))), static_cast<Index>(std::floor(ext_hi))};
    g.ramp = {std::max<Index>(0, static_cast<Index>(std::ceil(x_bar))), static_cast<Index>(std::floor(y_bar))};

    double c_star = 1.0;
    for (Index x : gauge_points(g.extended.lo, g.extended.hi, weights)) {
        const auto xd = static_cast<double>(x);
        const double r = weights.t(xd) / bracket_pow(xd, k);
        const double worst = std::max(r, 1.0 / r);
        if (worst > c_star) {
            c_star = worst;
            g.C_star_witness = x;
        }
    }
    g.C_star = c_star;

    for (Index x : gauge_points(g.ramp.lo, g.ramp.hi, weights)) {
        const auto xd = static_cast<double>(x);
        const double r = bracket_pow(xd, k) / weights.t(xd);
        g.max_ramp_ratio = std::max(g.max_ramp_ratio, r);
        if (r > g.c_n_plus_one_pow) {
            ++g.violation_count;
            if (g.violations.size() < kMaxWitnesses) {
                g.violations.push_back({x, r, g.c_n_plus_one_pow});
            }
        }
    }
    return g;
}

}  // namespace besa
