#pragma once

#include "besa/banded_lu.hpp"
#include "besa/operator_spec.hpp"

#include <map>
#include <string>
#include <vector>

namespace besa {

/// Inclusive index window [lo, hi]. Windows are placed around the support of the
/// right-hand side, so they need not contain the origin.
struct Window {
    Index lo = 0;
    Index hi = 0;

    Window() = default;
    Window(Index lo_, Index hi_);

    [[nodiscard]] std::size_t width() const { return static_cast<std::size_t>(hi - lo + 1); }
    [[nodiscard]] bool contains(Index x) const { return x >= lo && x <= hi; }
    [[nodiscard]] Index center() const { return lo + (hi - lo) / 2; }

    friend bool operator==(const Window&, const Window&) = default;
};

/// Complex vector indexed by the integers of a window.
struct WindowVector {
    Window window;
    std::vector<Complex> values;

    WindowVector() = default;
    explicit WindowVector(Window w) : window(w), values(w.width()) {}

    [[nodiscard]] Complex at(Index x) const {
        return window.contains(x) ? values[static_cast<std::size_t>(x - window.lo)] : Complex{};
    }
    Complex& operator[](Index x) { return values[static_cast<std::size_t>(x - window.lo)]; }
    [[nodiscard]] double norm() const;
};

/// Compactly supported vector on the integers.
using SparseVector = std::map<Index, Complex>;

WindowVector embed(const SparseVector& g, Window window);

/// chi_N applied to real and imaginary parts separately.
Complex chi_clamp(Complex value, Index N);

struct TruncationParams {
    Index N = 1;
};

/// a^(N)(x, y) = chi_N(a(x, y)) for |x - y| <= N, zero otherwise.
OperatorSpec truncate_spec(const OperatorSpec& spec, TruncationParams params);

struct SectionLimits {
    /// Cap on complex entries held by the section plus its LU workspace.
    std::size_t max_entries = std::size_t{1} << 26;
};

class SectionTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite window of an infinite Hermitian matrix with zero-Dirichlet closure.
/// Stored row-wise with a uniform half-bandwidth w: row i holds columns i-w .. i+w.
class BandedSection {
public:
    BandedSection(Window window, std::size_t bandwidth, std::vector<Complex> packed,
                  std::vector<std::size_t> lower_extent, std::vector<std::size_t> upper_extent);

    [[nodiscard]] const Window& window() const { return window_; }
    [[nodiscard]] std::size_t bandwidth() const { return w_; }
    [[nodiscard]] std::size_t size() const { return window_.width(); }
    /// Reach of the furthest nonzero below/above the diagonal, per row.
    [[nodiscard]] const std::vector<std::size_t>& lower_extent() const { return lower_; }
    [[nodiscard]] const std::vector<std::size_t>& upper_extent() const { return upper_; }
    [[nodiscard]] bool hermitian() const { return hermitian_; }

    /// Entry at global coordinates; zero outside the window or band.
    [[nodiscard]] Complex entry(Index x, Index y) const;

    /// (A f) restricted to the window.
    [[nodiscard]] WindowVector apply(const WindowVector& f) const;

private:
    Window window_;
    std::size_t w_;
    std::vector<Complex> packed_;
    std::vector<std::size_t> lower_;
    std::vector<std::size_t> upper_;
    bool hermitian_ = true;
};

BandedSection build_section(const OperatorSpec& spec, Window window, const SectionLimits& limits = {});

struct SolveCertificate {
    double residual_norm = 0.0;  ///< ||(I - s i A) f - g||_2 on the window
    double rhs_norm = 0.0;
    double boundary_mass = 0.0;  ///< sum of |f_x|^2 over the outer half of the window
    double weighted_tail = 0.0;  ///< sum of <x>^(2k)|f_x|^2 over the outer half
    Window window_used;
    int growth_steps = 0;
    int refinement_steps = 0;
};

struct ShiftedSolution {
    WindowVector f;
    SolveCertificate certificate;
};

/// Solves (I - sign*i*A) f = g on the section's window by banded LU with partial
/// pivoting and up to two steps of iterative refinement. `g` must be supported in
/// the window. `k` only affects the reported weighted tail.
ShiftedSolution solve_shifted(const BandedSection& section, int sign, const WindowVector& g, double k = 0.0);

struct ResolventOptions {
    double tol = 1e-8;
    double k = 2.0;
    int max_growth = 24;
    SectionLimits limits;
};

struct ResolventResult {
    ShiftedSolution solution;  ///< last solve performed
    bool converged = false;
    std::vector<SolveCertificate> history;  ///< one certificate per window tried
    std::string failure;
};

/// Grows a window centred on the support of g by doubling until the boundary mass
/// drops below tol^2 and the weighted tail stops increasing.
ResolventResult adaptive_resolvent(const OperatorSpec& spec, const SparseVector& g, int sign,
                                   const ResolventOptions& options = {});

/// Initial window: support hull of g padded by ceil(c_n<edge>^gamma) on each side.
Window initial_window(const OperatorSpec& spec, const SparseVector& g);

}  // namespace besa
