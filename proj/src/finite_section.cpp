#include "besa/finite_section.hpp"

#include <limits>
#include <sstream>

namespace besa {

Window::Window(Index lo_, Index hi_) : lo(lo_), hi(hi_) {
    if (hi_ < lo_) {
        throw std::invalid_argument("window: hi must be >= lo");
    }
}

double WindowVector::norm() const {
    double s = 0.0;
    for (const Complex& v : values) {
        s += std::norm(v);
    }
    return std::sqrt(s);
}

WindowVector embed(const SparseVector& g, Window window) {
    WindowVector out(window);
    for (const auto& [x, v] : g) {
        if (!window.contains(x)) {
            throw std::invalid_argument("embed: right-hand side not supported inside the window");
        }
        out[x] = v;
    }
    return out;
}

Complex chi_clamp(Complex value, Index N) {
    if (N < 1) {
        throw std::invalid_argument("chi_clamp: N must be >= 1");
    }
    const auto n = static_cast<double>(N);
    return {std::clamp(value.real(), -n, n), std::clamp(value.imag(), -n, n)};
}

OperatorSpec truncate_spec(const OperatorSpec& spec, TruncationParams params) {
    if (params.N < 1) {
        throw std::invalid_argument("truncate_spec: N must be >= 1");
    }
    const Index N = params.N;
    std::ostringstream os;
    os << "truncated(N=" << N << ") " << spec.describe();
    return {spec.profile(), family::Derived{os.str()}, [spec, N](Index x, Index y) -> Complex {
                const Index d = x > y ? x - y : y - x;
                if (d > N) {
                    return {};
                }
                return chi_clamp(spec.entry(x, y), N);
            }};
}

BandedSection::BandedSection(Window window, std::size_t bandwidth, std::vector<Complex> packed,
                             std::vector<std::size_t> lower_extent, std::vector<std::size_t> upper_extent)
    : window_(window), w_(bandwidth), packed_(std::move(packed)), lower_(std::move(lower_extent)),
      upper_(std::move(upper_extent)) {
    const std::size_t n = window_.width();
    if (packed_.size() != n * (2 * w_ + 1) || lower_.size() != n || upper_.size() != n) {
        throw std::invalid_argument("BandedSection: storage does not match window and bandwidth");
    }
    for (std::size_t i = 0; i < n && hermitian_; ++i) {
        for (std::size_t d = 0; d <= w_ && i + d < n; ++d) {
            const Complex a = packed_[i * (2 * w_ + 1) + w_ + d];
            const Complex b = packed_[(i + d) * (2 * w_ + 1) + w_ - d];
            if (a != std::conj(b)) {
                hermitian_ = false;
                break;
            }
        }
    }
}

Complex BandedSection::entry(Index x, Index y) const {
    if (!window_.contains(x) || !window_.contains(y)) {
        return {};
    }
    const Index d = y - x;
    if (d > static_cast<Index>(w_) || -d > static_cast<Index>(w_)) {
        return {};
    }
    const auto i = static_cast<std::size_t>(x - window_.lo);
    return packed_[i * (2 * w_ + 1) + static_cast<std::size_t>(static_cast<Index>(w_) + d)];
}

WindowVector BandedSection::apply(const WindowVector& f) const {
    if (!(f.window == window_)) {
        throw std::invalid_argument("BandedSection::apply: vector window differs from section window");
    }
    const std::size_t n = size();
    WindowVector out(window_);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i >= lower_[i] ? i - lower_[i] : 0;
        const std::size_t j1 = std::min(n - 1, i + upper_[i]);
        Complex s{};
        const std::size_t base = i * (2 * w_ + 1) + w_;
        for (std::size_t j = j0; j <= j1; ++j) {
            s += packed_[base + j - i] * f.values[j];
        }
        out.values[i] = s;
    }
    return out;
}

BandedSection build_section(const OperatorSpec& spec, Window window, const SectionLimits& limits) {
    const std::size_t n = window.width();
    if (n > limits.max_entries) {
        throw SectionTooLarge("build_section: window wider than the memory cap");
    }
    const BandProfile& p = spec.profile();

    struct RowEntries {
        std::vector<std::pair<Index, Complex>> nz;
        std::size_t lower = 0;
        std::size_t upper = 0;
    };
    std::vector<RowEntries> rows(n);
    parallel_for(
        n,
        [&](std::size_t i) {
            const Index x = window.lo + static_cast<Index>(i);
            const auto xd = static_cast<double>(x);
            const Index y0 = std::max(window.lo, x - static_cast<Index>(std::ceil(p.lower_reach(xd))));
            const Index y1 = std::min(window.hi, x + static_cast<Index>(std::ceil(p.upper_reach(xd))));
            RowEntries& r = rows[i];
            for (Index y = y0; y <= y1; ++y) {
                const Complex a = spec.entry(x, y);
                if (a != Complex{}) {
                    r.nz.emplace_back(y - x, a);
                    if (y < x) {
                        r.lower = std::max(r.lower, static_cast<std::size_t>(x - y));
                    } else {
                        r.upper = std::max(r.upper, static_cast<std::size_t>(y - x));
                    }
                }
            }
        },
        32);

    std::size_t w = 0;
    for (const auto& r : rows) {
        w = std::max({w, r.lower, r.upper});
    }
    const std::size_t needed = n * (2 * w + 1) + BandedLU::storage_size(n, w, w);
    if (needed > limits.max_entries) {
        std::ostringstream os;
        os << "build_section: window of width " << n << " and half-bandwidth " << w << " needs " << needed
           << " entries, cap is " << limits.max_entries;
        throw SectionTooLarge(os.str());
    }

    std::vector<Complex> packed(n * (2 * w + 1));
    std::vector<std::size_t> lower(n), upper(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [d, a] : rows[i].nz) {
            packed[i * (2 * w + 1) + static_cast<std::size_t>(static_cast<Index>(w) + d)] = a;
        }
        lower[i] = rows[i].lower;
        upper[i] = rows[i].upper;
    }
    return {window, w, std::move(packed), std::move(lower), std::move(upper)};
}

namespace {

WindowVector shifted_apply(const BandedSection& section, int sign, const WindowVector& f) {
    WindowVector af = section.apply(f);
    const Complex shift(0.0, -static_cast<double>(sign));
    for (std::size_t i = 0; i < af.values.size(); ++i) {
        af.values[i] = f.values[i] + shift * af.values[i];
    }
    return af;
}

double residual(const BandedSection& section, int sign, const WindowVector& f, const WindowVector& g,
                WindowVector* r_out) {
    WindowVector r = shifted_apply(section, sign, f);
    double s = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        r.values[i] = g.values[i] - r.values[i];
        s += std::norm(r.values[i]);
    }
    if (r_out != nullptr) {
        *r_out = std::move(r);
    }
    return std::sqrt(s);
}

void fill_tail_stats(const WindowVector& f, double k, SolveCertificate& cert) {
    const std::size_t n = f.values.size();
    const std::size_t q = n / 4;
    double mass = 0.0, weighted = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (i < q || i >= n - q) {
            const double m = std::norm(f.values[i]);
            mass += m;
            weighted += bracket_pow(static_cast<double>(f.window.lo + static_cast<Index>(i)), 2.0 * k) * m;
        }
    }
    cert.boundary_mass = mass;
    cert.weighted_tail = weighted;
}

}  // namespace

ShiftedSolution solve_shifted(const BandedSection& section, int sign, const WindowVector& g, double k) {
    if (sign != 1 && sign != -1) {
        throw std::invalid_argument("solve_shifted: sign must be +1 or -1");
    }
    const Window& win = section.window();
    WindowVector rhs(win);
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        const Index x = g.window.lo + static_cast<Index>(i);
        if (g.values[i] == Complex{}) {
            continue;
        }
        if (!win.contains(x)) {
            throw std::invalid_argument("solve_shifted: right-hand side not supported inside the window");
        }
        rhs[x] = g.values[i];
    }

    const std::size_t n = section.size();
    const std::size_t w = section.bandwidth();
    BandedLU lu(n, w, w);
    const Complex shift(0.0, -static_cast<double>(sign));
    for (std::size_t i = 0; i < n; ++i) {
        const Index x = win.lo + static_cast<Index>(i);
        const std::size_t j0 = i >= w ? i - w : 0;
        const std::size_t j1 = std::min(n - 1, i + w);
        for (std::size_t j = j0; j <= j1; ++j) {
            const Complex a = section.entry(x, win.lo + static_cast<Index>(j));
            const Complex m = (i == j ? Complex(1.0, 0.0) : Complex{}) + shift * a;
            if (m != Complex{}) {
                lu.set(i, j, m);
            }
        }
    }
    lu.factorize();

    ShiftedSolution out;
    out.f = rhs;
    lu.solve(out.f.values);

    SolveCertificate& cert = out.certificate;
    cert.rhs_norm = rhs.norm();
    WindowVector r;
    cert.residual_norm = residual(section, sign, out.f, rhs, &r);
    const double target = 1e-14 * std::max(cert.rhs_norm, std::numeric_limits<double>::min());
    while (cert.refinement_steps < 2 && cert.residual_norm > target) {
        WindowVector d = r;
        lu.solve(d.values);
        WindowVector candidate = out.f;
        for (std::size_t i = 0; i < n; ++i) {
            candidate.values[i] += d.values[i];
        }
        WindowVector r2;
        const double res2 = residual(section, sign, candidate, rhs, &r2);
        ++cert.refinement_steps;
        if (!(res2 < cert.residual_norm)) {
            break;
        }
        out.f = std::move(candidate);
        r = std::move(r2);
        cert.residual_norm = res2;
    }
    cert.window_used = win;
    fill_tail_stats(out.f, k, cert);
    return out;
}

Window initial_window(const OperatorSpec& spec, const SparseVector& g) {
    if (g.empty()) {
        throw std::invalid_argument("adaptive_resolvent: right-hand side has empty support");
    }
    const Index smin = g.begin()->first;
    const Index smax = g.rbegin()->first;
    const BandProfile& p = spec.profile();
    const auto pad_lo = static_cast<Index>(std::ceil(p.lower_reach(static_cast<double>(smin))));
    const auto pad_hi = static_cast<Index>(std::ceil(p.lower_reach(static_cast<double>(smax))));
    return {smin - pad_lo, smax + pad_hi};
}

ResolventResult adaptive_resolvent(const OperatorSpec& spec, const SparseVector& g, int sign,
                                   const ResolventOptions& options) {
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("adaptive_resolvent: tol must be positive");
    }
    if (!(options.k >= 1.0)) {
        throw std::invalid_argument("adaptive_resolvent: k must be >= 1");
    }
    const Window start = initial_window(spec, g);
    const Index center = g.begin()->first + (g.rbegin()->first - g.begin()->first) / 2;
    const Index half0 = std::max(center - start.lo, start.hi - center);
    const double tol2 = options.tol * options.tol;

    ResolventResult result;
    for (int step = 0; step <= options.max_growth; ++step) {
        const Index half = half0 << step;
        const Window win(center - half, center + half);
        try {
            const BandedSection section = build_section(spec, win, options.limits);
            result.solution = solve_shifted(section, sign, embed(g, win), options.k);
        } catch (const SectionTooLarge& e) {
            result.failure = e.what();
            return result;
        }
        SolveCertificate& cert = result.solution.certificate;
        cert.growth_steps = step;
        result.history.push_back(cert);

        const bool quiet_boundary = cert.boundary_mass < tol2;
        const bool tail_ok = step == 0 ? cert.weighted_tail < tol2
                                       : cert.weighted_tail <= result.history[result.history.size() - 2].weighted_tail;
        if (quiet_boundary && tail_ok) {
            result.converged = true;
            return result;
        }
    }
    std::ostringstream os;
    os << "adaptive_resolvent: no convergence after " << options.max_growth << " doublings (boundary mass "
       << result.solution.certificate.boundary_mass << ")";
    result.failure = os.str();
    return result;
}

}  // namespace besa
