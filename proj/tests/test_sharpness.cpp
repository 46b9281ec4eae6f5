#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "plap/sharpness.hpp"

using namespace plap;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("cutoff: plateaus, symmetry, monotonicity") {
    Cutoff psi(0.2);
    CHECK(psi.value(0.0) == 0.0);
    CHECK(psi.value(0.1) == 0.0);
    CHECK(psi.value(0.2) == 1.0);
    CHECK(psi.value(5.0) == 1.0);
    CHECK(psi.value(0.15) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(psi.deriv(0.05) == 0.0);
    CHECK(psi.deriv(0.3) == 0.0);

    double prev = -1.0;
    for (int i = 0; i <= 400; ++i) {
        const double x = 0.25 * i / 400.0;
        const double v = psi.value(x);
        CHECK(v >= prev);
        CHECK(psi.deriv(x) >= 0.0);
        prev = v;
    }

    // Derivative consistent with central differences inside the transition.
    for (double x : {0.12, 0.15, 0.18}) {
        const double h = 1e-6;
        const double fd = (psi.value(x + h) - psi.value(x - h)) / (2 * h);
        CHECK(psi.deriv(x) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("warp profile: plateau identities") {
    for (double eps : {0.2, 0.05}) {
        for (int n : {2, 3, 5}) {
            WarpProfile wp(eps, n, 3.0);
            // Inner plateau: f = sinh exactly.
            for (double x : {0.1 * eps, 0.3 * eps, 0.5 * eps}) {
                CHECK(wp.f(x) ==
                      doctest::Approx(std::sinh(x)).epsilon(1e-10));
                CHECK(wp.h(x) ==
                      doctest::Approx(1.0 / std::tanh(x)).epsilon(1e-10));
            }
            // Outer plateau: f = delta e^{-x}, h = -1.
            for (double x : {eps, 1.5 * eps, 1.0, 2.5}) {
                CHECK(wp.f(x) ==
                      doctest::Approx(wp.delta() * std::exp(-x))
                          .epsilon(1e-10));
                CHECK(wp.h(x) == doctest::Approx(-1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("warp profile: delta bound and comparison with sinh") {
    for (double eps : {0.25, 0.1, 0.01}) {
        WarpProfile wp(eps, 3, 2.0);
        CHECK(wp.delta() > 0.0);
        CHECK(wp.delta() <= std::exp(eps) * std::sinh(eps) * (1 + 1e-12));
        // The glued profile never exceeds the space-form warp.
        for (const auto& s : wp.grid())
            if (s.x > 0.0) CHECK(s.f <= std::sinh(s.x) * (1 + 1e-12));
    }
    CHECK_THROWS_AS(WarpProfile(0.3, 3, 2.0), DomainError);
    CHECK_THROWS_AS(WarpProfile(-0.1, 3, 2.0), DomainError);
}

TEST_CASE("warp profile: f and f' are consistent") {
    WarpProfile wp(0.1, 4, 2.0);
    const auto& g = wp.grid();
    for (std::size_t i = 1; i + 1 < g.size(); i += 37) {
        const double fd = (g[i + 1].f - g[i - 1].f) / (g[i + 1].x - g[i - 1].x);
        CHECK(g[i].f_prime == doctest::Approx(fd).epsilon(5e-3));
        CHECK(g[i].f_prime == doctest::Approx(g[i].h * g[i].f).epsilon(1e-10));
    }
}

TEST_CASE("ricci certificate: residual non-positive up to tolerance") {
    for (double eps : {0.1, 0.01}) {
        for (int n : {2, 3, 5}) {
            WarpProfile wp(eps, n, 1.0);
            CHECK(ricci_certificate(wp) <= 1e-6);
        }
    }
}

TEST_CASE("ricci residual: exact on both plateaus") {
    // Inner branch: h = coth, f = sinh gives residual
    //   -csch^2 + (n-1)(coth^2 - 1) - (n-2)/sinh^2 = 0.
    // Outer branch: h = -1 gives -(n-2)/f^2 <= 0.
    WarpProfile wp(0.1, 5, 1.0);
    auto residual = [&](double x) {
        const double f = wp.f(x);
        return wp.h_prime(x) + 4.0 * (wp.h(x) * wp.h(x) - 1.0) - 3.0 / (f * f);
    };
    CHECK(std::abs(residual(0.03)) < 1e-8);
    CHECK(residual(0.5) < 0.0);
}

TEST_CASE("domain geometry") {
    CHECK(sphere_area(2) == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(sphere_area(3) == doctest::Approx(4 * kPi).epsilon(1e-14));
    CHECK(sphere_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-13));

    const double delta = 0.05;
    DomainSpec spec = domain_for(delta, 2.0);
    CHECK(spec.R_eps ==
          doctest::Approx(2.0 - delta - kPi * delta * std::exp(delta - 1.0))
              .epsilon(1e-14));
    CHECK(spec.D_lo <= spec.D_hi);
    CHECK(spec.D_lo >= spec.R_eps);
    CHECK(spec.D_hi <= 2.0 + 1e-14);

    // R_eps -> D_target as delta -> 0.
    double prev_gap = 1e300;
    for (double d : {1e-2, 1e-4, 1e-6}) {
        const double gap = 2.0 - domain_for(d, 2.0).R_eps;
        CHECK(gap > 0.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-4);
}

TEST_CASE("quotient on the constructed domain brackets lambda_bar") {
    const double p = 2.0;
    const int n = 3;
    const double D_target = 2.0;
    Model1D target({p, n, -1.0, D_target});
    const double lower = target.eigenvalue_from_D().lambda_bar;

    const double eps = 0.02;
    WarpProfile wp(eps, n, D_target);
    DomainSpec spec = domain_for(wp.delta(), D_target);
    Model1D ball({p, n, -1.0, spec.R_eps});
    EigenSolution w = ball.eigenvalue_from_D();

    QuotientResult q = quotient_on_domain(wp, w, p, spec.R_eps);
    CHECK(q.numerator > 0.0);
    CHECK(q.denominator > 0.0);
    CHECK(q.quotient >= lower * (1.0 - 1e-9));
    CHECK(q.quotient <= lower * 1.10);

    auto [c1, c2] = cap_integrals(wp, w, p, spec.R_eps);
    CHECK(c1 >= 0.0);
    CHECK(c2 >= 0.0);
    CHECK(c1 <= q.numerator);
    CHECK(c2 <= q.denominator);
}

TEST_CASE("convergence study: gap closes as eps decreases") {
    auto rows = convergence_study({0.1, 0.05, 0.02}, 2.0, 3, 2.0);
    REQUIRE(rows.size() == 3);
    double prev_gap = 1e300;
    for (const auto& row : rows) {
        CHECK(row.lower <= row.upper * (1.0 + 1e-12));
        CHECK(row.gap >= 0.0);
        CHECK(row.gap < prev_gap);
        CHECK(row.R_eps < 2.0);
        prev_gap = row.gap;
    }
    // The bracket width scales like eps, roughly 5 eps at this geometry.
    CHECK(rows.back().gap / rows.back().lower < 0.15);
}

TEST_CASE("convergence study: other exponents and dimensions") {
    auto rows = convergence_study({0.05, 0.02}, 1.5, 2, 1.0);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].gap < rows[0].gap);
    CHECK(rows[1].lower <= rows[1].upper);
}
