#include "besa/proof_diagnostics.hpp"

#include "dense_oracle.hpp"

#include <doctest.h>

using namespace besa;
using namespace besa::testing;

TEST_SUITE("proof-diagnostics") {

TEST_CASE("weight values") {
    const WeightProfile w(2.0, 3.0, 5.0);
    CHECK(w.t(2) == doctest::Approx(10.0));
    CHECK(w.t(4) == doctest::Approx(17.0));
    CHECK(w.t(7) == doctest::Approx(26.0));
    for (Index x = 0; x <= 12; ++x) {
        CHECK(w.t(static_cast<double>(x)) == w.t(static_cast<double>(-x)));
        CHECK(w.t(static_cast<double>(x + 1)) >= w.t(static_cast<double>(x)));
    }
    CHECK_THROWS(WeightProfile(1.0, 4.0, 4.0));
    CHECK_THROWS(WeightProfile(0.0, 1.0, 4.0));
    const auto vals = weight_values(w, {-2, 2});
    REQUIRE(vals.size() == 5);
    CHECK(vals.front().x == -2);
}

TEST_CASE("weight lipschitz") {
    const WeightProfile w(2.0, 3.0, 5.0);
    const LipschitzReport r = check_weight_lipschitz(w, {-10, 10}, 21);
    CHECK(r.passed());
    // Inside the ramp the bound is an equality: |17 - 26| = |17 - 26|.
    CHECK(std::abs(w.t(4) - w.t(5)) == doctest::Approx(std::abs(bracket_pow(4, 2) - bracket_pow(5, 2))));
    CHECK(r.min_slack == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("gauge constants") {
    const BandProfile band(1, 0.0);
    const GaugeConstants g = gauge_constants(WeightProfile(2.0, 100.0, 1e4), band);
    CHECK(g.c_n_plus_one_pow == doctest::Approx(3.0));
    CHECK(g.passed());
    // Measured on |x| in [X_bar - c_n, Y_bar + c_n] = [96, 10004].
    CHECK(g.extended.lo == 96);
    CHECK(g.extended.hi == 10004);
    CHECK(g.C_star == doctest::Approx(1.0850602148204405).epsilon(1e-12));

    const GaugeConstants small = gauge_constants(WeightProfile(1e-9, 100.0, 1e4), band);
    CHECK(small.C_star == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(small.c_n_plus_one_pow == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("row smallness") {
    SmallnessOptions opt;
    opt.horizon = 100'000;
    const SmallnessResult poly =
        weighted_row_smallness(make_poly_growth_band(BandProfile(1, 0.5), -0.2), 0.5, 1.0, opt);
    CHECK(poly.found);
    CHECK(poly.X_bar > 0.0);
    CHECK(poly.X > poly.X_bar);
    CHECK(poly.worst_ratio < 1.0);

    opt.horizon = 10'000;
    const SmallnessResult ce = weighted_row_smallness(make_counterexample(1.5), 0.5, 2.0, opt);
    CHECK_FALSE(ce.found);
    CHECK(ce.worst_ratio > 1.0);

    const SmallnessResult zero = weighted_row_smallness(make_zero(), 0.5, 2.0, opt);
    CHECK(zero.found);
    CHECK(zero.X_bar == 1.0);
}

TEST_CASE("weighted row sums by hand") {
    // Row 10 of the counterexample (delta = 2): neighbours 9 and 11.
    const double k = 2.0;
    const double expect = 81.0 * std::abs(bracket_sq(9) / bracket_sq(10) - 1.0) +
                          100.0 * std::abs(bracket_sq(11) / bracket_sq(10) - 1.0);
    CHECK(weighted_row_sum(make_counterexample(2.0), 10, k) == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("commutator split: diagonal and constant weights vanish") {
    const OperatorSpec d = make_diagonal(3.0);
    const Window w(-10, 10);
    const BandedSection sec = build_section(d, w);
    WindowVector f(w);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        f.values[i] = Complex(1.0 / (1.0 + static_cast<double>(i)), 0.5);
    }
    const CommutatorSplit s = commutator_split(sec, f, WeightProfile(2.0, 3.0, 6.0), d.profile());
    CHECK(std::abs(s.form_bilinear) == 0.0);
    CHECK(s.I1 + s.I2 == 0.0);
    CHECK(s.young_holds());

    // f supported in |x| < X - 1 sees only the flat part of the weight.
    const OperatorSpec ce = make_bounded_test(2.0);
    const BandedSection sec2 = build_section(ce, Window(-20, 20));
    WindowVector g(Window(-20, 20));
    for (Index x = -5; x <= 5; ++x) {
        g[x] = Complex(1.0, static_cast<double>(x));
    }
    const CommutatorSplit s2 = commutator_split(sec2, g, WeightProfile(2.0, 8.0, 9.0), ce.profile());
    CHECK(std::abs(s2.form_bilinear) == 0.0);
    CHECK(s2.I1 + s2.I2 == 0.0);
}

TEST_CASE("commutator split against a dense TA - AT") {
    const OperatorSpec ce = make_counterexample(2.0);
    const Window w(0, 50);
    const BandedSection sec = build_section(ce, w);
    const ShiftedSolution sol = solve_shifted(sec, 1, embed({{10, Complex(1, 0)}}, w), 2.0);
    const WeightProfile weights(2.0, 10.0, 40.0);
    const CommutatorSplit s = commutator_split(sec, sol.f, weights, ce.profile());

    const DenseMatrix a = dense_section(ce, w);
    const auto n = a.rows();
    DenseMatrix t = DenseMatrix::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        t(i, i) = weights.t(static_cast<double>(w.lo + i));
    }
    const DenseVector f = to_dense(sol.f);
    const DenseVector tf = t * f;
    // <u, v> = sum u conj(v)
    const Complex dense_form = (((t * a - a * t) * f).adjoint() * tf)(0);
    CHECK(std::abs(s.form_bilinear - dense_form) <= 1e-10 * std::abs(dense_form));
    CHECK(std::abs(s.form_direct - dense_form) <= 1e-10 * std::abs(dense_form));
    CHECK(s.young_holds());
    CHECK(s.identity_error() < 1e-10);
    CHECK(s.real_part_residual() < 1e-10);
}

TEST_CASE("apriori bound trivial cases") {
    const Window w(-5, 5);
    const WindowVector g = embed({{0, Complex(1, 0)}}, w);
    const AprioriReport z = apriori_bound_check(g, g, 2.0, 2.0, 0.5, doubling_ladder(4.0, 32.0));
    CHECK(z.passed());
    CHECK(z.worst_ratio() == doctest::Approx(1.0));

    const ShiftedSolution d = solve_shifted(build_section(make_diagonal(2.0), w), 1, g);
    const AprioriReport r = apriori_bound_check(d.f, g, 2.0, 2.0, 0.5, doubling_ladder(4.0, 32.0));
    CHECK(r.passed());
    CHECK(r.worst_ratio() == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("doubling ladder") {
    const auto l = doubling_ladder(100.0, 1000.0);
    CHECK(l == std::vector<double>{100, 200, 400, 800, 1000});
    CHECK_THROWS(doubling_ladder(0.0, 10.0));
}

TEST_CASE("bracket ratio sweep") {
    for (int n : {1, 2}) {
        const BracketSweepReport r = bracket_ratio_sweep(n, 3.0, 100'000);
        CHECK(r.passed());
        CHECK(r.C == doctest::Approx(9.0 * n));
    }
}

}  // TEST_SUITE
