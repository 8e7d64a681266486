#include "besa/banded_lu.hpp"
#include "besa/finite_section.hpp"

#include "dense_oracle.hpp"

#include <doctest.h>

using namespace besa;
using namespace besa::testing;

TEST_SUITE("finite-section") {

TEST_CASE("chi_clamp") {
    CHECK(chi_clamp(Complex(3, 0), 5) == Complex(3, 0));
    CHECK(chi_clamp(Complex(7, -9), 5) == Complex(5, -5));
    CHECK(chi_clamp(Complex(-2, 4), 4) == Complex(-2, 4));
}

TEST_CASE("truncate_spec") {
    const OperatorSpec t = truncate_spec(make_counterexample(2.0), {10});
    CHECK(t.entry(3, 4) == Complex(9, 0));
    // 16 and 25 both exceed N = 10.
    CHECK(t.entry(4, 5) == Complex(10, 0));
    CHECK(t.entry(5, 6) == Complex(10, 0));
    CHECK(t.entry(6, 5) == Complex(10, 0));
    CHECK(verify_hermitian(t, {-20, 20}).passed());

    const OperatorSpec z = truncate_spec(make_zero(), {3});
    for (Index x = -5; x <= 5; ++x) {
        CHECK(z.entry(x, x) == Complex{});
        CHECK(z.entry(x, x + 1) == Complex{});
    }

    // Clamp inactive once N exceeds every entry in the inspected range.
    const OperatorSpec s = make_poly_growth_band(BandProfile(1, 0.5), 0.3);
    const OperatorSpec big = truncate_spec(s, {1000});
    for (Index x = -40; x <= 40; ++x) {
        for (Index y = x - 10; y <= x + 10; ++y) {
            CHECK(big.entry(x, y) == s.entry(x, y));
        }
    }

    // |x - y| > N is cut.
    const OperatorSpec narrow = truncate_spec(make_poly_growth_band(BandProfile(3, 0.0), 0.0), {2});
    CHECK(narrow.entry(0, 3) == Complex{});
    CHECK(narrow.entry(0, 2) != Complex{});
}

TEST_CASE("build_section patterns") {
    const BandedSection d = build_section(make_diagonal(2.0), Window(-2, 2));
    CHECK(d.size() == 5);
    for (Index x = -2; x <= 2; ++x) {
        CHECK(d.entry(x, x) == Complex(2, 0));
        if (x < 2) {
            CHECK(d.entry(x, x + 1) == Complex{});
        }
    }

    const OperatorSpec ce = make_counterexample(2.0);
    const BandedSection c = build_section(ce, Window(1, 4));
    CHECK(c.entry(1, 2) == Complex(1, 0));
    CHECK(c.entry(2, 3) == Complex(4, 0));
    CHECK(c.entry(3, 4) == Complex(9, 0));
    CHECK(c.entry(4, 3) == Complex(9, 0));
    CHECK(c.entry(1, 1) == Complex{});
    // Zero-Dirichlet closure: nothing outside the window.
    CHECK(c.entry(4, 5) == Complex{});

    const BandedSection c0 = build_section(ce, Window(0, 3));
    CHECK(c0.entry(0, 1) == Complex{});
    CHECK(c0.entry(1, 2) == Complex(1, 0));
    CHECK(c0.entry(2, 3) == Complex(4, 0));

    const BandedSection z = build_section(make_zero(), Window(-3, 3));
    for (Index x = -3; x <= 3; ++x) {
        for (Index y = -3; y <= 3; ++y) {
            CHECK(z.entry(x, y) == Complex{});
        }
    }
}

TEST_CASE("section size cap") {
    SectionLimits lim;
    lim.max_entries = 1000;
    CHECK_THROWS_AS(build_section(make_poly_growth_band(BandProfile(1, 0.5), 0.0), Window(0, 10'000), lim),
                    SectionTooLarge);
}

TEST_CASE("section apply matches dense product") {
    std::mt19937_64 rng(11);
    const OperatorSpec s = random_hermitian_band(rng, -20, 20, 3, 5.0);
    const Window w(-15, 17);
    const BandedSection sec = build_section(s, w);
    WindowVector f(w);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : f.values) {
        v = Complex(u(rng), u(rng));
    }
    const DenseVector ref = dense_section(s, w) * to_dense(f);
    CHECK(max_abs_diff(sec.apply(f), ref) < 1e-12);
}

TEST_CASE("banded LU against dense LU on a nonsymmetric band") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::size_t n = 40, kl = 3, ku = 2;
    BandedLU lu(n, kl, ku);
    DenseMatrix m = DenseMatrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i >= kl ? i - kl : 0; j <= std::min(n - 1, i + ku); ++j) {
            const Complex v(u(rng), u(rng));
            lu.set(i, j, v);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    }
    std::vector<Complex> b(n);
    DenseVector bd(n);
    for (std::size_t i = 0; i < n; ++i) {
        b[i] = Complex(u(rng), u(rng));
        bd(static_cast<Eigen::Index>(i)) = b[i];
    }
    lu.factorize();
    lu.solve(b);
    const DenseVector ref = m.partialPivLu().solve(bd);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(std::abs(b[i] - ref(static_cast<Eigen::Index>(i))) < 1e-10);
    }
}

TEST_CASE("banded LU rejects a singular matrix") {
    BandedLU lu(3, 1, 1);
    lu.set(0, 0, 1.0);
    lu.set(1, 1, 0.0);
    lu.set(2, 2, 1.0);
    CHECK_THROWS_AS(lu.factorize(), FactorizationError);
}

TEST_CASE("solve_shifted closed forms") {
    const BandedSection d = build_section(make_diagonal(2.0), Window(-3, 3));
    const ShiftedSolution s = solve_shifted(d, 1, embed({{0, Complex(1, 0)}}, Window(-3, 3)));
    CHECK(std::abs(s.f.at(0) - Complex(0.2, 0.4)) < 1e-12);
    for (Index x : {-3, -1, 1, 3}) {
        CHECK(s.f.at(x) == Complex{});
    }
    const ShiftedSolution m = solve_shifted(d, -1, embed({{0, Complex(1, 0)}}, Window(-3, 3)));
    CHECK(std::abs(m.f.at(0) - Complex(0.2, -0.4)) < 1e-12);

    const BandedSection z = build_section(make_zero(), Window(-4, 4));
    const WindowVector g = embed({{-2, Complex(1, 2)}, {3, Complex(-0.5, 0)}}, Window(-4, 4));
    CHECK(solve_shifted(z, 1, g).f.values == g.values);
}

TEST_CASE("tridiagonal constant off-diagonal against dense oracle") {
    std::vector<ExplicitEntry> e;
    for (Index x = -30; x < 30; ++x) {
        e.push_back({x, x + 1, Complex(1, 0)});
    }
    const OperatorSpec s = make_explicit(BandProfile(1, 0.0), std::move(e));
    const Window w(-20, 20);
    const ShiftedSolution sol = solve_shifted(build_section(s, w), 1, embed({{0, Complex(1, 0)}}, w));
    const DenseVector ref = dense_shifted_solve(dense_section(s, w), 1, to_dense(embed({{0, Complex(1, 0)}}, w)));
    CHECK(max_abs_diff(sol.f, ref) < 1e-10);
}

TEST_CASE("adaptive resolvent trivial cases") {
    ResolventOptions opt;
    const ResolventResult z = adaptive_resolvent(make_zero(), {{0, Complex(1, 0)}}, 1, opt);
    REQUIRE(z.converged);
    CHECK(z.history.size() == 1);
    CHECK(z.solution.f.at(0) == Complex(1, 0));

    const ResolventResult d =
        adaptive_resolvent(make_diagonal(2.0), {{0, Complex(1, 0)}, {5, Complex(1, 0)}}, 1, opt);
    REQUIRE(d.converged);
    CHECK(d.history.size() == 1);
    CHECK(std::abs(d.solution.f.at(0) - Complex(0.2, 0.4)) < 1e-12);
    CHECK(std::abs(d.solution.f.at(5) - Complex(0.2, 0.4)) < 1e-12);
    CHECK(std::abs(d.solution.f.at(2)) == 0.0);
}

TEST_CASE("adaptive resolvent on the poly band: weighted tail settles") {
    ResolventOptions opt;
    opt.k = 2;
    opt.tol = 1e-8;
    const OperatorSpec s = make_poly_growth_band(BandProfile(1, 0.5), -0.2);
    const ResolventResult r = adaptive_resolvent(s, {{0, Complex(1, 0)}}, 1, opt);
    REQUIRE(r.converged);
    CHECK(r.solution.certificate.boundary_mass < 1e-16);
    CHECK(r.solution.certificate.residual_norm < 1e-10);

    // Re-solve at successively wider windows: the weighted tail beyond |x| = M
    // must decrease in M over the last doublings.
    const Window w = r.solution.certificate.window_used;
    const WindowVector& f = r.solution.f;
    auto tail = [&](Index m) {
        double acc = 0.0;
        for (Index x = w.lo; x <= w.hi; ++x) {
            if (std::abs(x) > m) {
                acc += bracket_pow(static_cast<double>(x), 4.0) * std::norm(f.at(x));
            }
        }
        return acc;
    };
    const Index half = (w.hi - w.lo) / 2;
    CHECK(tail(half / 8) >= tail(half / 4));
    CHECK(tail(half / 4) >= tail(half / 2));
    CHECK(tail(half / 2) >= tail(half));
}

TEST_CASE("adaptive resolvent reports non-convergence") {
    ResolventOptions opt;
    opt.max_growth = 1;
    opt.tol = 1e-12;
    const ResolventResult r =
        adaptive_resolvent(make_poly_growth_band(BandProfile(1, 0.5), 0.5), {{0, Complex(1, 0)}}, 1, opt);
    CHECK_FALSE(r.converged);
    CHECK_FALSE(r.failure.empty());
    CHECK(r.history.size() == 2);
}

TEST_CASE("norm contraction on random hermitian sections") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const OperatorSpec s = random_hermitian_band(rng, -40, 40, 1 + trial % 5, 10.0);
        const Window w(-30, 30);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        WindowVector g(w);
        for (auto& v : g.values) {
            v = Complex(u(rng), u(rng));
        }
        const ShiftedSolution sol = solve_shifted(build_section(s, w), trial % 2 == 0 ? 1 : -1, g);
        CHECK(sol.f.norm() <= g.norm() * (1.0 + 1e-12));
    }
}

TEST_CASE("truncation converges to the untruncated solution") {
    const OperatorSpec s = make_bounded_test(24.0);
    const SparseVector g{{0, Complex(1, 0)}, {3, Complex(0, -1)}};
    ResolventOptions opt;
    const ResolventResult full = adaptive_resolvent(s, g, 1, opt);
    REQUIRE(full.converged);
    const Window w = full.solution.certificate.window_used;
    for (Index n : {16, 32}) {
        const BandedSection sec = build_section(truncate_spec(s, {n}), w);
        const ShiftedSolution t = solve_shifted(sec, 1, embed(g, w));
        double diff = 0.0;
        for (Index x = w.lo; x <= w.hi; ++x) {
            diff = std::max(diff, std::abs(t.f.at(x) - full.solution.f.at(x)));
        }
        CHECK(diff <= 1e-8);
    }
}

}  // TEST_SUITE
