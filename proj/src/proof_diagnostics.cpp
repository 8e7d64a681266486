#include "besa/proof_diagnostics.hpp"

#include <limits>

namespace besa {

LipschitzReport check_weight_lipschitz(const WeightProfile& weights, IndexRange range, Index max_separation) {
    LipschitzReport report;
    report.range = range;
    report.max_separation = max_separation;
    report.min_slack = std::numeric_limits<double>::infinity();
    const double k = weights.k();
    for (Index x = range.lo; x <= range.hi; ++x) {
        const auto xd = static_cast<double>(x);
        const double tx = weights.t(xd);
        const double px = bracket_pow(xd, k);
        for (Index y = x + 1; y <= std::min(range.hi, x + max_separation); ++y) {
            const auto yd = static_cast<double>(y);
            const double lhs = std::abs(tx - weights.t(yd));
            const double rhs = std::abs(px - bracket_pow(yd, k));
            ++report.pairs_checked;
            report.min_slack = std::min(report.min_slack, rhs - lhs);
            // Mixed-branch pairs compare differently rounded powers; allow a few ulps.
            if (lhs > rhs * (1.0 + 1e-12)) {
                report.violations.push_back({x, y, lhs, rhs});
            }
        }
    }
    return report;
}

namespace {

template <class Term>
double band_row_sum(const OperatorSpec& spec, Index x, Term term) {
    const BandProfile& p = spec.profile();
    const auto xd = static_cast<double>(x);
    const auto below = static_cast<Index>(std::ceil(p.lower_reach(xd)));
    const auto above = static_cast<Index>(std::ceil(p.upper_reach(xd)));
    double s = 0.0;
    for (Index y = x - below; y <= x + above; ++y) {
        const double a = std::abs(spec.entry(x, y));
        if (a != 0.0) {
            s += a * term(y);
        }
    }
    return s;
}

std::vector<Index> geometric_probes(Index horizon, int per_decade) {
    std::vector<Index> out;
    const double decades = std::log10(static_cast<double>(horizon));
    const int total = static_cast<int>(std::ceil(decades * per_decade));
    for (int j = 0; j <= total; ++j) {
        auto v = static_cast<Index>(std::llround(std::pow(10.0, static_cast<double>(j) / per_decade)));
        v = std::min(v, horizon);
        if (out.empty() || v > out.back()) {
            out.push_back(v);
        }
    }
    if (out.back() != horizon) {
        out.push_back(horizon);
    }
    return out;
}

}  // namespace

double weighted_row_sum(const OperatorSpec& spec, Index x, double k) {
    const double bx = bracket_sq(static_cast<double>(x));
    return band_row_sum(spec, x, [&](Index y) {
        return std::abs(std::pow(bracket_sq(static_cast<double>(y)) / bx, k / 2.0) - 1.0);
    });
}

double weighted_row_sum_dual(const OperatorSpec& spec, Index y, double k) {
    // a_xy with y fixed is conj(a_yx), so the row of y carries the same moduli.
    const double by = bracket_sq(static_cast<double>(y));
    return band_row_sum(spec, y, [&](Index x) {
        const double r = std::pow(bracket_sq(static_cast<double>(x)) / by, k / 2.0);
        return r * std::abs(r - 1.0);
    });
}

double weight_X_for_inner_edge(double X_bar, const BandProfile& band) {
    auto h = [&band](double X) { return X - band.lower_reach(X); };
    double lo = std::max(X_bar, 1e-12);
    double hi = std::max(1.0, lo);
    while (h(hi) < X_bar) {
        hi *= 2.0;
    }
    if (h(lo) >= X_bar) {
        return lo;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (h(mid) < X_bar ? lo : hi) = mid;
    }
    return hi;
}

SmallnessResult weighted_row_smallness(const OperatorSpec& spec, double delta, double k,
                                       const SmallnessOptions& options) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("weighted_row_smallness: delta must lie in (0, 1)");
    }
    if (!(k > 0.0)) {
        throw std::invalid_argument("weighted_row_smallness: k must be positive");
    }
    if (options.horizon < 2 || options.samples_per_decade < 1) {
        throw std::invalid_argument("weighted_row_smallness: horizon must be >= 2");
    }
    const BandProfile& band = spec.profile();
    SmallnessResult res;
    res.delta = delta;
    res.k = k;
    res.horizon = options.horizon;
    res.threshold = delta / std::pow(band.c_n() + 1.0, k / 2.0);

    const std::vector<Index> mags = geometric_probes(options.horizon, options.samples_per_decade);
    res.probes.resize(mags.size());
    parallel_for(
        mags.size(),
        [&](std::size_t i) {
            const Index x = mags[i];
            res.probes[i] = {x, std::max(weighted_row_sum(spec, x, k), weighted_row_sum(spec, -x, k)),
                             std::max(weighted_row_sum_dual(spec, x, k), weighted_row_sum_dual(spec, -x, k))};
        },
        1);

    // Smallest suffix start for the primary sums.
    std::size_t start = mags.size();
    while (start > 0 && res.probes[start - 1].sum < res.threshold) {
        --start;
    }
    // Walk outward until the dual sums clear the gauge-dependent threshold too.
    for (std::size_t j = start; j < mags.size(); ++j) {
        const double x_bar = static_cast<double>(mags[j]);
        const double X = weight_X_for_inner_edge(x_bar, band);
        const double Y = options.y_factor * X;
        const GaugeConstants gauge = gauge_constants(WeightProfile(k, X, Y), band);
        const double dual_threshold = delta / (gauge.C_star * gauge.C_star * gauge.C_star);
        bool ok = true;
        double worst = 0.0;
        for (std::size_t i = j; i < mags.size(); ++i) {
            worst = std::max({worst, res.probes[i].sum / res.threshold, res.probes[i].dual_sum / dual_threshold});
            if (res.probes[i].dual_sum >= dual_threshold) {
                ok = false;
                break;
            }
        }
        if (ok) {
            res.found = true;
            res.X_bar = x_bar;
            res.X = X;
            res.Y = Y;
            res.C_star = gauge.C_star;
            res.dual_threshold = dual_threshold;
            res.worst_ratio = worst;
            return res;
        }
    }
    for (const auto& p : res.probes) {
        res.worst_ratio = std::max(res.worst_ratio, p.sum / res.threshold);
    }
    return res;
}

bool CommutatorSplit::young_holds(double rel_tol) const {
    return std::abs(form_bilinear) <= (I1 + I2) * (1.0 + rel_tol) + std::numeric_limits<double>::min();
}

double CommutatorSplit::identity_error() const {
    const double denom = std::max(std::abs(form_direct), I1 + I2);
    if (denom == 0.0) {
        return std::abs(form_bilinear - form_direct) == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return std::abs(form_bilinear - form_direct) / denom;
}

double CommutatorSplit::real_part_residual() const {
    if (symmetric_scale == 0.0) {
        return 0.0;
    }
    return std::abs(symmetric_form.imag()) / symmetric_scale;
}

CommutatorSplit commutator_split(const BandedSection& section, const WindowVector& f, const WeightProfile& weights,
                                 const BandProfile& band) {
    const Window& win = section.window();
    if (!(f.window == win)) {
        throw std::invalid_argument("commutator_split: f must live on the section window");
    }
    const std::size_t n = section.size();
    std::vector<double> t(n);
    WindowVector tf(win);
    for (std::size_t i = 0; i < n; ++i) {
        t[i] = weights.t(static_cast<double>(win.lo + static_cast<Index>(i)));
        tf.values[i] = t[i] * f.values[i];
    }

    CommutatorSplit out;
    out.X_bar = inner_edge(weights, band);
    out.Y_bar = outer_edge(weights, band);
    for (std::size_t i = 0; i < n; ++i) {
        out.weighted_norm_sq += std::norm(tf.values[i]);
    }

    const auto w = static_cast<Index>(section.bandwidth());
    for (std::size_t i = 0; i < n; ++i) {
        const Index x = win.lo + static_cast<Index>(i);
        const double fi2 = std::norm(f.values[i]);
        for (Index y = std::max(win.lo, x - w); y <= std::min(win.hi, x + w); ++y) {
            const auto j = static_cast<std::size_t>(y - win.lo);
            const Complex axy = section.entry(x, y);
            if (axy == Complex{}) {
                continue;
            }
            const double mag = std::abs(axy);
            const double dt = t[j] - t[i];
            out.I1 += 0.5 * mag * t[i] * std::abs(dt) * fi2;
            out.I2 += 0.5 * mag * t[i] * std::abs(dt) * std::norm(f.values[j]);
            // a_yx = conj(a_xy) only when Hermitian; read it from the section.
            const Complex ayx = section.entry(y, x);
            out.form_bilinear += ayx * (t[i] - t[j]) * t[i] * f.values[i] * std::conj(f.values[j]);
            out.symmetric_scale += std::abs(tf.values[i]) * mag * std::abs(tf.values[j]);
        }
    }

    const WindowVector af = section.apply(f);
    const WindowVector atf = section.apply(tf);
    Complex direct{}, sym{};
    for (std::size_t i = 0; i < n; ++i) {
        const Complex v = t[i] * af.values[i] - atf.values[i];
        direct += tf.values[i] * std::conj(v);
        sym += tf.values[i] * std::conj(atf.values[i]);
    }
    out.form_direct = direct;
    out.symmetric_form = sym;
    out.delta_margin = out.weighted_norm_sq > 0.0 ? (out.I1 + out.I2) / out.weighted_norm_sq : 0.0;
    return out;
}

bool AprioriReport::passed() const {
    return !steps.empty() && std::all_of(steps.begin(), steps.end(), [](const AprioriStep& s) { return s.passed; });
}

double AprioriReport::worst_ratio() const {
    double w = 0.0;
    for (const auto& s : steps) {
        w = std::max(w, s.ratio);
    }
    return w;
}

AprioriReport apriori_bound_check(const WindowVector& f, const WindowVector& g, double k, double X, double delta,
                                  const std::vector<double>& Y_ladder) {
    if (!(delta > 0.0 && delta < 1.0)) {
        throw std::invalid_argument("apriori_bound_check: delta must lie in (0, 1)");
    }
    AprioriReport report;
    report.delta = delta;
    report.X = X;
    report.k = k;
    auto weighted_norm = [](const WindowVector& v, const WeightProfile& w) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.values.size(); ++i) {
            const double t = w.t(static_cast<double>(v.window.lo + static_cast<Index>(i)));
            s += t * t * std::norm(v.values[i]);
        }
        return std::sqrt(s);
    };
    for (double Y : Y_ladder) {
        const WeightProfile w(k, X, Y);
        AprioriStep s;
        s.Y = Y;
        s.norm_Tf = weighted_norm(f, w);
        s.norm_Tg = weighted_norm(g, w);
        s.ratio = s.norm_Tg > 0.0 ? s.norm_Tf / s.norm_Tg : (s.norm_Tf > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        s.bound = 1.0 / (1.0 - delta);
        s.passed = s.ratio <= s.bound;
        report.steps.push_back(s);
    }
    return report;
}

std::vector<double> doubling_ladder(double Y0, double y_max) {
    if (!(Y0 > 0.0) || !(y_max >= Y0)) {
        throw std::invalid_argument("doubling_ladder: need 0 < Y0 <= y_max");
    }
    std::vector<double> out;
    for (double Y = Y0; Y < y_max; Y *= 2.0) {
        out.push_back(Y);
    }
    out.push_back(y_max);
    return out;
}

BracketSweepReport bracket_ratio_sweep(int n, double k0, Index x_max) {
    if (n < 1 || !(k0 > 0.0) || x_max < 1) {
        throw std::invalid_argument("bracket_ratio_sweep: need n >= 1, k0 > 0, x_max >= 1");
    }
    BracketSweepReport r;
    r.n = n;
    r.k0 = k0;
    r.C = 3.0 * k0 * n;
    r.x_max = x_max;
    // Evenness of <.> maps (x, m) to (-x, -m), so x > 0 with |m| <= n covers both signs.
    for (Index x = 1; x <= x_max; ++x) {
        const auto xd = static_cast<double>(x);
        const double bx = bracket_sq(xd);
        for (Index m = -n; m <= n; ++m) {
            const double v = std::abs(std::pow(bracket_sq(xd + static_cast<double>(m)) / bx, k0 / 2.0) - 1.0);
            const double ratio = std::sqrt(bx) * v / r.C;
            if (ratio > r.worst_ratio) {
                r.worst_ratio = ratio;
                r.witness_x = x;
                r.witness_m = m;
            }
        }
    }
    return r;
}

}  // namespace besa
