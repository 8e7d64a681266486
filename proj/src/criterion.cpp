#include "besa/criterion.hpp"

#include "besa/weights.hpp"

#include <limits>

namespace besa {

double row_l1(const OperatorSpec& spec, Index x) {
    const BandProfile& p = spec.profile();
    const auto xd = static_cast<double>(x);
    const auto below = static_cast<Index>(std::ceil(p.lower_reach(xd)));
    const auto above = static_cast<Index>(std::ceil(p.upper_reach(xd)));
    double sum = 0.0;
    for (Index y = x - below; y <= x + above; ++y) {
        sum += std::abs(spec.entry(x, y));
    }
    return sum;
}

double criterion_ratio(const OperatorSpec& spec, Index x) {
    const double denom = bracket_pow(static_cast<double>(x), 1.0 - spec.profile().gamma());
    return row_l1(spec, x) / denom;
}

CStarBound c_star_bound(int n, double k0, double C_star) {
    if (n < 1) {
        throw std::invalid_argument("c_star_bound: n must be >= 1");
    }
    if (!(k0 > 2.0)) {
        throw std::invalid_argument("c_star_bound: k0 must exceed 2");
    }
    if (!(C_star >= 1.0)) {
        throw std::invalid_argument("c_star_bound: C_star must be >= 1");
    }
    const double denom = std::pow(n + 1.0, k0 / 2.0) + C_star * C_star * C_star;
    return {n, k0, C_star, 2.0 / denom};
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::EsaThmMain: return "ESA_THM_MAIN";
        case Verdict::EsaNjThreshold: return "ESA_NJ_THRESHOLD";
        case Verdict::Inconclusive: return "INCONCLUSIVE";
    }
    return "INCONCLUSIVE";
}

std::vector<Index> shell_edges(Index x_max, int shells) {
    if (shells < 3) {
        throw std::invalid_argument("estimate_limsup: need at least 3 shells");
    }
    if (x_max < 16 * static_cast<Index>(shells)) {
        throw std::invalid_argument("estimate_limsup: x_max must be at least 16 * shells");
    }
    const double lo = std::floor(std::sqrt(static_cast<double>(x_max)));
    const double ratio = static_cast<double>(x_max) / lo;
    std::vector<Index> edges;
    edges.reserve(static_cast<std::size_t>(shells) + 1);
    for (int j = 0; j <= shells; ++j) {
        auto e = static_cast<Index>(std::llround(lo * std::pow(ratio, static_cast<double>(j) / shells)));
        if (j == shells) {
            e = x_max;
        }
        if (!edges.empty() && e <= edges.back()) {
            e = edges.back() + 1;
        }
        edges.push_back(e);
    }
    if (edges.back() != x_max) {
        throw std::invalid_argument("estimate_limsup: x_max too small to form distinct shells");
    }
    return edges;
}

CriterionReport estimate_limsup(const OperatorSpec& spec, Index x_max, int shells, const CriterionOptions& options) {
    const std::vector<Index> edges = shell_edges(x_max, shells);
    CriterionReport report;
    report.x_max = x_max;
    report.shell_count = shells;

    // Sample list: for each shell and sign, a strided run of rows.
    struct Sample {
        int shell;
        Index x;
    };
    std::vector<Sample> samples;
    for (int j = 0; j < shells; ++j) {
        const Index lo = edges[static_cast<std::size_t>(j)];
        const Index hi = j + 1 == shells ? edges[static_cast<std::size_t>(j) + 1] : edges[static_cast<std::size_t>(j) + 1] - 1;
        const Index count = hi - lo + 1;
        const auto cap = static_cast<Index>(std::max<std::size_t>(1, options.max_samples_per_shell));
        const Index stride = (count + cap - 1) / cap;
        for (Index a = lo; a <= hi; a += stride) {
            samples.push_back({j, a});
            samples.push_back({j, -a});
        }
        if ((hi - lo) % stride != 0) {
            samples.push_back({j, hi});
            samples.push_back({j, -hi});
        }
        report.shells.push_back({lo, hi, lo, 0.0, 0});
    }

    std::vector<double> values(samples.size());
    parallel_for(samples.size(), [&](std::size_t i) { values[i] = criterion_ratio(spec, samples[i].x); }, 16);

    // Per-shell, per-sign maxima; ties resolve to the first sample so the report is
    // independent of the worker count.
    std::vector<std::pair<Index, double>> pos(static_cast<std::size_t>(shells), {0, -1.0});
    std::vector<std::pair<Index, double>> neg(static_cast<std::size_t>(shells), {0, -1.0});
    for (std::size_t i = 0; i < samples.size(); ++i) {
        auto& slot = samples[i].x >= 0 ? pos[static_cast<std::size_t>(samples[i].shell)]
                                       : neg[static_cast<std::size_t>(samples[i].shell)];
        if (values[i] > slot.second) {
            slot = {samples[i].x, values[i]};
        }
        ++report.shells[static_cast<std::size_t>(samples[i].shell)].samples;
    }
    for (std::size_t j = 0; j < report.shells.size(); ++j) {
        auto& s = report.shells[j];
        const auto& best = pos[j].second >= neg[j].second ? pos[j] : neg[j];
        s.argmax = best.first;
        s.max_ratio = best.second;
        report.ratios.push_back(pos[j]);
        report.ratios.push_back(neg[j]);
    }
    report.tail_sup = report.shells.back().max_ratio;

    std::vector<double> lx, ly;
    for (const auto& s : report.shells) {
        if (s.max_ratio > 0.0) {
            lx.push_back(std::log(bracket(static_cast<double>(s.argmax))));
            ly.push_back(std::log(s.max_ratio));
        }
    }
    if (report.tail_sup == 0.0) {
        report.trend_exponent = -std::numeric_limits<double>::infinity();
    } else if (lx.size() < 2) {
        report.trend_exponent = std::numeric_limits<double>::quiet_NaN();
    } else {
        report.trend_exponent = fit_slope(lx, ly);
    }

    const BandProfile& p = spec.profile();
    const bool nj = p.gamma() == 0.0;
    if (nj) {
        const double x_inner = static_cast<double>(edges.front());
        const GaugeConstants gauge =
            gauge_constants(WeightProfile(options.k0, x_inner, static_cast<double>(x_max)), p);
        report.c_star = c_star_bound(p.n(), options.k0, gauge.C_star);
        report.c_star_working = options.c_star_safety * report.c_star->value;
    }

    // trend < 0 is false for NaN, so an unfittable trend never yields ESA_THM_MAIN.
    if (report.tail_sup <= options.tail_tolerance && report.trend_exponent < 0.0) {
        report.verdict = Verdict::EsaThmMain;
        report.margin = options.tail_tolerance - report.tail_sup;
    } else if (nj && report.tail_sup <= report.c_star_working) {
        report.verdict = Verdict::EsaNjThreshold;
        report.margin = report.c_star_working - report.tail_sup;
    } else {
        report.verdict = Verdict::Inconclusive;
        report.margin = (nj ? report.c_star_working : options.tail_tolerance) - report.tail_sup;
    }
    return report;
}

}  // namespace besa
