#include "besa/deficiency.hpp"

#include <future>
#include <limits>

namespace besa {

std::string to_string(DefectClass c) {
    switch (c) {
        case DefectClass::SquareSummable: return "SQUARE_SUMMABLE";
        case DefectClass::Divergent: return "DIVERGENT";
        case DefectClass::Borderline: return "BORDERLINE";
    }
    return "BORDERLINE";
}

ScaledValue DefectSolution::at(Index x) const {
    if (x <= 0 || x > x_max) {
        return {};
    }
    return values[static_cast<std::size_t>(x - 1)];
}

DefectClass classify_exponent(double decay_exponent, double margin) {
    const double twice = 2.0 * decay_exponent;
    if (twice > 1.0 + margin) {
        return DefectClass::SquareSummable;
    }
    if (twice < 1.0 - margin) {
        return DefectClass::Divergent;
    }
    return DefectClass::Borderline;
}

namespace {

constexpr double kHigh = 1e100;
constexpr double kLow = 1e-100;

}  // namespace

DefectSolution defect_recurrence(const OperatorSpec& spec, Index x_max, int shift_sign, const DefectOptions& options) {
    const auto* fam = std::get_if<family::Counterexample>(&spec.family());
    if (fam == nullptr) {
        throw std::invalid_argument("defect_recurrence: spec must be the counterexample family");
    }
    if (x_max < 100) {
        throw std::invalid_argument("defect_recurrence: x_max must be >= 100");
    }
    if (shift_sign != 1 && shift_sign != -1) {
        throw std::invalid_argument("defect_recurrence: shift sign must be +1 or -1");
    }
    const double d = fam->growth_exponent;
    const Complex lambda(0.0, static_cast<double>(shift_sign));

    DefectSolution sol;
    sol.growth_exponent = d;
    sol.shift_sign = shift_sign;
    sol.x_max = x_max;
    sol.values.reserve(static_cast<std::size_t>(x_max));

    // Row 1 reads a_{1,2} u_2 = lambda u_1 since u_0 = 0; row x >= 2 gives the
    // three-term step. prev/cur share one running log scale.
    Complex prev(1.0, 0.0);
    Complex cur = lambda * prev;
    double scale = 0.0;
    sol.values.push_back({prev, 0.0});
    if (x_max >= 2) {
        sol.values.push_back({cur, 0.0});
    }
    for (Index x = 2; x < x_max; ++x) {
        const auto xd = static_cast<double>(x);
        const Complex next = (lambda * cur - std::pow(xd - 1.0, d) * prev) / std::pow(xd, d);
        prev = cur;
        cur = next;
        const double mag = std::max(std::abs(prev), std::abs(cur));
        if (mag > kHigh || (mag < kLow && mag > 0.0)) {
            prev /= mag;
            cur /= mag;
            scale += std::log(mag);
            ++sol.renormalizations;
        }
        sol.values.push_back({cur, scale});
    }

    sol.partial_sums.reserve(sol.values.size());
    double s = 0.0;
    for (const auto& v : sol.values) {
        s += std::exp(2.0 * v.log_abs());
        sol.partial_sums.push_back(s);
    }

    const Index fit_lo = std::max<Index>(1, x_max / options.fit_divisor);
    double slopes[2] = {0.0, 0.0};
    for (int parity = 0; parity < 2; ++parity) {
        std::vector<double> lx, ly;
        for (Index x = fit_lo; x <= x_max; ++x) {
            if (x % 2 != parity) {
                continue;
            }
            const double la = sol.at(x).log_abs();
            if (std::isfinite(la)) {
                lx.push_back(std::log(static_cast<double>(x)));
                ly.push_back(la);
            }
        }
        slopes[parity] = lx.size() >= 2 ? -fit_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
    }
    sol.decay_exponent_even = slopes[0];
    sol.decay_exponent_odd = slopes[1];
    sol.decay_exponent = 0.5 * (slopes[0] + slopes[1]);
    // A NaN exponent fails both strict comparisons and lands on BORDERLINE.
    sol.classification = classify_exponent(sol.decay_exponent, options.margin);
    return sol;
}

DeficiencyReport classify_deficiency(const OperatorSpec& spec, Index x_max, const DefectOptions& options) {
    auto minus = std::async(std::launch::async, [&] { return defect_recurrence(spec, x_max, -1, options); });
    DeficiencyReport r;
    r.plus = defect_recurrence(spec, x_max, +1, options);
    r.minus = minus.get();

    const DefectClass a = r.plus.classification;
    const DefectClass b = r.minus.classification;
    if (a == DefectClass::SquareSummable && b == DefectClass::SquareSummable) {
        r.deficiency_estimate = std::pair{1, 1};
        r.esa_consistent = false;
        r.inconclusive = false;
    } else if (a == DefectClass::Divergent && b == DefectClass::Divergent) {
        r.deficiency_estimate = std::pair{0, 0};
        r.esa_consistent = true;
        r.inconclusive = false;
    }
    const auto& ps = r.plus.partial_sums;
    const double head = ps[ps.size() / 2 - 1];
    r.partial_sum_tail = std::isinf(ps.back()) ? ps.back() : ps.back() - head;
    return r;
}

}  // namespace besa
