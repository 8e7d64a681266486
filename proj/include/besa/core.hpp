#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace besa {

using Index = std::int64_t;
using Complex = std::complex<double>;

/// Closed integer interval [lo, hi].
struct IndexRange {
    Index lo = 0;
    Index hi = 0;

    [[nodiscard]] Index size() const { return hi >= lo ? hi - lo + 1 : 0; }
};

/// 1 + a^2. Exact for integers with |a| <= 2^25.
inline double bracket_sq(double a) { return 1.0 + a * a; }

/// Japanese bracket <a> = (1 + |a|^2)^(1/2).
inline double bracket(double a) { return std::sqrt(bracket_sq(a)); }

/// <a>^p, with p == 0 returning exactly 1.
inline double bracket_pow(double a, double p) {
    if (p == 0.0) {
        return 1.0;
    }
    return std::pow(bracket_sq(a), 0.5 * p);
}

/// Worker cap: BANDED_ESA_THREADS if set and positive, else hardware concurrency.
inline std::size_t worker_count() {
    if (const char* env = std::getenv("BANDED_ESA_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) {
            return static_cast<std::size_t>(v);
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Static-partition parallel loop over [0, count). `fn(i)` must only touch slot i
/// of any shared output, so results do not depend on the worker count.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, std::size_t min_chunk = 64) {
    const std::size_t workers =
        std::min(worker_count(), std::max<std::size_t>(1, count / std::max<std::size_t>(1, min_chunk)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            fn(i);
        }
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        if (begin >= end) {
            break;
        }
        pool.emplace_back([begin, end, &fn] {
            for (std::size_t i = begin; i < end; ++i) {
                fn(i);
            }
        });
    }
}

/// Least-squares slope of ys against xs.
inline double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        throw std::invalid_argument("fit_slope: need at least two paired samples");
    }
    const double m = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_slope: abscissae are all equal");
    }
    return sxy / sxx;
}

}  // namespace besa
