#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "plap/gentrig.hpp"
#include "plap/numerics.hpp"

using namespace plap;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

const std::vector<double> kExponents{1.2, 1.5, 2.0, 3.0, 5.0};
} // namespace

TEST_CASE("pi_p closed form and quadrature oracle agree") {
    CHECK(pi_p(2.0) == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(pi_p(4.0) == doctest::Approx(kPi / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(pi_p(1.5) ==
          doctest::Approx(2.0 * kPi / (1.5 * std::sin(2.0 * kPi / 3.0)))
              .epsilon(1e-14));

    // Independent oracle: 2 * int_0^1 (1 - t^p)^(-1/p) dt. The endpoint
    // singularity (1-t)^(-1/p) caps the attainable accuracy at roughly
    // eps_machine^(1 - 1/p), so the comparison loosens as p drops.
    for (auto [p, tol] : {std::pair{4.0, 1e-6}, std::pair{1.5, 2e-4}}) {
        const double quad = 2.0 * integrate(
                                      [p = p](double t) {
                                          return std::pow(
                                              1.0 - std::pow(t, p), -1.0 / p);
                                      },
                                      0.0, 1.0, Tolerance{1e-7, 1e-7, 100000});
        CHECK(pi_p(p) == doctest::Approx(quad).epsilon(tol));
    }
    CHECK_THROWS_AS(pi_p(1.0), DomainError);
    CHECK_THROWS_AS(pi_p(0.5), DomainError);
}

TEST_CASE("arcsin_p endpoints and classical value") {
    for (double p : kExponents) {
        GenTrigTable trig(p);
        CHECK(trig.arcsin(0.0) == 0.0);
        CHECK(trig.arcsin(1.0) ==
              doctest::Approx(trig.half_pi()).epsilon(1e-13));
    }
    CHECK(arcsin_p(2.0, 0.5) == doctest::Approx(kPi / 6).epsilon(1e-13));
    CHECK_THROWS_AS(arcsin_p(2.0, -0.1), DomainError);
    CHECK_THROWS_AS(arcsin_p(2.0, 1.1), DomainError);
}

TEST_CASE("sin_p endpoints and classical reduction") {
    for (double p : kExponents) {
        GenTrigTable trig(p);
        CHECK(trig.sin(0.0) == 0.0);
        CHECK(trig.sin(trig.half_pi()) == doctest::Approx(1.0));
        CHECK(trig.cos(0.0) == doctest::Approx(1.0));
        CHECK(std::abs(trig.cos(trig.half_pi())) < 1e-12);
    }
    GenTrigTable trig2(2.0, 128);
    for (int i = 0; i <= 100; ++i) {
        const double t = -2.0 * kPi + 4.0 * kPi * i / 100.0;
        CHECK(trig2.sin(t) == doctest::Approx(std::sin(t)).epsilon(1e-11));
        CHECK(trig2.cos(t) == doctest::Approx(std::cos(t)).epsilon(1e-11));
    }
}

TEST_CASE("pythagorean identity across the whole line") {
    std::mt19937 rng(7);
    for (double p : kExponents) {
        GenTrigTable trig(p, 128);
        std::uniform_real_distribution<double> uni(-2.0 * trig.pi(),
                                                   2.0 * trig.pi());
        for (int i = 0; i < 300; ++i) {
            const double t = uni(rng);
            const double s = trig.sin(t), c = trig.cos(t);
            CHECK(std::abs(std::pow(std::abs(s), p) +
                           std::pow(std::abs(c), p) - 1.0) <= 1e-10);
        }
    }
}

TEST_CASE("arcsin_p inverts sin_p on the principal branch") {
    for (double p : kExponents) {
        GenTrigTable trig(p, 128);
        for (int i = 0; i <= 64; ++i) {
            const double t = trig.half_pi() * i / 64.0;
            // arcsin' blows up at 1, so the roundtrip loses accuracy as t
            // approaches pi_p/2.
            CHECK(std::abs(trig.arcsin(trig.sin(t)) - t) <= 1e-7);
        }
    }
}

TEST_CASE("oddness and periodicity") {
    std::mt19937 rng(11);
    for (double p : kExponents) {
        GenTrigTable trig(p, 128);
        std::uniform_real_distribution<double> uni(-trig.pi(), trig.pi());
        for (int i = 0; i < 100; ++i) {
            const double t = uni(rng);
            CHECK(std::abs(trig.sin(-t) + trig.sin(t)) <= 1e-10);
            CHECK(std::abs(trig.sin(t + 2.0 * trig.pi()) - trig.sin(t)) <=
                  1e-10);
        }
    }
}

TEST_CASE("sin_p strictly increasing on the principal branch") {
    for (double p : kExponents) {
        GenTrigTable trig(p, 128);
        double prev = -1.0;
        for (int i = 0; i <= 200; ++i) {
            const double s = trig.sin(trig.half_pi() * i / 200.0);
            CHECK(s > prev);
            prev = s;
        }
    }
}

TEST_CASE("(cos_p)^(p-1) is C1 across pi_p/2") {
    // Finite-difference slope of d/dt (cos_p)^(p-1) from both sides.
    for (double p : kExponents) {
        GenTrigTable trig(p, 128);
        const double tp = trig.half_pi();
        auto g = [&](double t) {
            return signed_pow(trig.cos(t), p - 1.0);
        };
        const double h = 1e-5;
        const double left = (g(tp) - g(tp - h)) / h;
        const double right = (g(tp + h) - g(tp)) / h;
        // g' = -(p-1) |sin_p|^(p-1) near pi_p/2, so both one-sided slopes
        // approach -(p-1).
        CHECK(left == doctest::Approx(-(p - 1.0)).epsilon(1e-3));
        CHECK(right == doctest::Approx(-(p - 1.0)).epsilon(1e-3));
    }
}

namespace {

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

} // namespace

TEST_CASE("endpoint expansions of cos_p^(p-1) sin_p") {
    for (double p : {1.5, 2.0, 3.0}) {
        GenTrigTable trig(p, 128);
        auto product = [&](double phi) {
            const auto sc = trig.sincos_principal(phi);
            return std::pow(sc.c, p - 1.0) * sc.s;
        };
        // Near 0: product = phi + O(phi^{p+1}).
        std::vector<double> lx, ly;
        for (double phi = 1e-3; phi < 2e-1; phi *= 2.0) {
            lx.push_back(std::log(phi));
            ly.push_back(std::log(std::abs(product(phi) - phi)));
        }
        CHECK(fit_slope(lx, ly) == doctest::Approx(p + 1.0).epsilon(0.05));

        // Near pi_p/2: product = (p-1) psi + O(psi^{1 + p/(p-1)}).
        lx.clear();
        ly.clear();
        for (double psi = 1e-2; psi < 2e-1; psi *= 2.0) {
            lx.push_back(std::log(psi));
            ly.push_back(std::log(
                std::abs(product(trig.half_pi() - psi) - (p - 1.0) * psi)));
        }
        const double expected = 1.0 + p / (p - 1.0);
        CHECK(fit_slope(lx, ly) == doctest::Approx(expected).epsilon(0.08));
    }
}
