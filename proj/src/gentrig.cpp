#include "plap/gentrig.hpp"

#include <algorithm>
#include <cmath>

namespace plap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

const Tolerance kQuadTol{1e-13, 1e-15, 2000};

} // namespace

GenTrigTable::GenTrigTable(double p, std::size_t grid) : p_(p) {
    if (!(p > 1.0)) throw DomainError("GenTrigTable: requires p > 1");
    pi_p_ = 2.0 * kPi / (p * std::sin(kPi / p));
    half_pi_ = 0.5 * pi_p_;

    x_split_ = 0.7;
    phi_split_ = arcsin_direct(x_split_);
    c_split_ = std::pow(one_minus_pow(x_split_), 1.0 / p_);

    if (grid > 0) {
        std::vector<double> phis(grid + 1), sins(grid + 1);
        for (std::size_t i = 0; i <= grid; ++i) {
            const double phi =
                half_pi_ * static_cast<double>(i) / static_cast<double>(grid);
            phis[i] = phi;
            sins[i] = sin_from_phi(phi);
        }
        grid_phi_ = std::move(phis);
        grid_sin_ = std::move(sins);
    }
}

double GenTrigTable::one_minus_pow(double x) const {
    if (x <= 0.0) return 1.0;
    if (x >= 1.0) return 0.0;
    if (x > 0.5) return -std::expm1(p_ * std::log(x));
    return 1.0 - std::pow(x, p_);
}

double GenTrigTable::arcsin_direct(double x) const {
    if (x == 0.0) return 0.0;
    const double p = p_;
    return integrate(
        [p](double t) {
            const double omp = (t > 0.5) ? -std::expm1(p * std::log(t))
                                         : 1.0 - std::pow(t, p);
            return std::pow(omp, -1.0 / p);
        },
        0.0, x, kQuadTol);
}

// pi_p/2 - arcsin_p(s) as a function of c = (1 - s^p)^(1/p):
//   A(c) = int_0^c u^(p-2) (1 - u^p)^(1/p - 1) du
// with u = v^(1/(p-1)) substituted to regularize the u -> 0 end for p < 2:
//   A(c) = 1/(p-1) int_0^{c^(p-1)} (1 - v^(p/(p-1)))^(1/p - 1) dv.
double GenTrigTable::comp_arc(double c) const {
    if (c <= 0.0) return 0.0;
    const double p = p_;
    const double q = p / (p - 1.0);
    const double upper = std::pow(c, p - 1.0);
    return integrate(
                [p, q](double v) {
                    const double omp = (v > 0.5)
                                           ? -std::expm1(q * std::log(v))
                                           : 1.0 - std::pow(v, q);
                    return std::pow(omp, 1.0 / p - 1.0);
                },
                0.0, upper, kQuadTol) /
           (p - 1.0);
}

double GenTrigTable::grid_guess(double phi) const {
    if (grid_phi_.empty())
        return std::sin(0.5 * kPi * phi / half_pi_); // classical-shape guess
    const double step = half_pi_ / static_cast<double>(grid_phi_.size() - 1);
    std::size_t k = static_cast<std::size_t>(phi / step);
    k = std::min(k, grid_phi_.size() - 2);
    const double s = (phi - grid_phi_[k]) / step;
    return (1.0 - s) * grid_sin_[k] + s * grid_sin_[k + 1];
}

double GenTrigTable::sin_from_phi(double phi) const {
    if (phi <= 0.0) return 0.0;
    if (phi >= half_pi_) return 1.0;
    if (phi > phi_split_) {
        const double c = cos_from_psi(half_pi_ - phi);
        return std::pow(one_minus_pow(c), 1.0 / p_);
    }

    // Safeguarded Newton on arcsin(s) = phi; the derivative of arcsin is
    // (1 - s^p)^(-1/p), so each update is s -= g(s) * (1 - s^p)^(1/p).
    double lo = 0.0, hi = x_split_;
    double s = std::clamp(grid_guess(phi), lo, hi);
    for (int iter = 0; iter < 80; ++iter) {
        const double g = arcsin_direct(s) - phi;
        // Relative criterion: sin_p(phi) ~ phi near zero, and downstream
        // phase computations need full relative accuracy there.
        if (std::abs(g) <= 1e-15 * phi) return s;
        if (g > 0.0)
            hi = s;
        else
            lo = s;
        double snew = s - g * std::pow(one_minus_pow(s), 1.0 / p_);
        if (!(snew > lo && snew < hi)) snew = 0.5 * (lo + hi);
        if (std::abs(snew - s) <=
            4.0 * std::numeric_limits<double>::epsilon() * snew)
            return snew;
        s = snew;
    }
    return s;
}

double GenTrigTable::cos_from_psi(double psi) const {
    if (psi <= 0.0) return 0.0;
    const double p = p_;
    // Leading order A(c) ~ c^(p-1)/(p-1), hence c ~ ((p-1) psi)^(1/(p-1)).
    double lo = 0.0, hi = std::min(1.0, c_split_ * (1.0 + 1e-12));
    double c = std::clamp(std::pow((p - 1.0) * psi, 1.0 / (p - 1.0)), lo, hi);
    for (int iter = 0; iter < 80; ++iter) {
        const double g = comp_arc(c) - psi;
        if (std::abs(g) <= 1e-15 * psi) return c;
        if (g > 0.0)
            hi = c;
        else
            lo = c;
        const double deriv =
            std::pow(c, p - 2.0) * std::pow(one_minus_pow(c), 1.0 / p - 1.0);
        double cnew = c - g / deriv;
        if (!(cnew > lo && cnew < hi)) cnew = 0.5 * (lo + hi);
        if (std::abs(cnew - c) <=
            4.0 * std::numeric_limits<double>::epsilon() * cnew)
            return cnew;
        c = cnew;
    }
    return c;
}

GenTrigTable::SinCos GenTrigTable::sincos_from_top(double psi) const {
    psi = std::clamp(psi, 0.0, half_pi_);
    SinCos out;
    if (psi < half_pi_ - phi_split_) {
        // cos is solved directly from the complementary arc, so the pair is
        // relative-accurate in psi even when psi underflows phi = pi_p/2 - psi
        // at working precision.
        out.c = cos_from_psi(psi);
        out.s = std::pow(one_minus_pow(out.c), 1.0 / p_);
    } else {
        out.s = sin_from_phi(half_pi_ - psi);
        out.c = std::pow(one_minus_pow(out.s), 1.0 / p_);
    }
    return out;
}

GenTrigTable::SinCos GenTrigTable::sincos_principal(double phi) const {
    phi = std::clamp(phi, 0.0, half_pi_);
    SinCos out;
    if (phi <= phi_split_) {
        out.s = sin_from_phi(phi);
        out.c = std::pow(one_minus_pow(out.s), 1.0 / p_);
    } else {
        out.c = cos_from_psi(half_pi_ - phi);
        out.s = std::pow(one_minus_pow(out.c), 1.0 / p_);
    }
    return out;
}

double GenTrigTable::arcsin(double x) const {
    if (!(x >= 0.0 && x <= 1.0))
        throw DomainError("arcsin_p: argument must lie in [0, 1]");
    if (x <= x_split_) return arcsin_direct(x);
    const double c = std::pow(one_minus_pow(x), 1.0 / p_);
    return half_pi_ - comp_arc(c);
}

namespace {

// Reduce t to (sign, quadrant-folded phi in [0, pi_p/2], cos sign).
struct Reduced {
    double phi;
    double sin_sign;
    double cos_sign;
};

Reduced reduce(double t, double pi_p) {
    double r = std::fmod(t, 2.0 * pi_p);
    if (r > pi_p) r -= 2.0 * pi_p;
    if (r < -pi_p) r += 2.0 * pi_p;
    Reduced out;
    out.sin_sign = (r < 0.0) ? -1.0 : 1.0;
    double a = std::abs(r);
    if (a > 0.5 * pi_p) {
        out.phi = pi_p - a;
        out.cos_sign = -1.0;
    } else {
        out.phi = a;
        out.cos_sign = 1.0;
    }
    return out;
}

} // namespace

double GenTrigTable::sin(double t) const {
    const Reduced r = reduce(t, pi_p_);
    return r.sin_sign * sin_from_phi(r.phi);
}

double GenTrigTable::cos(double t) const {
    const Reduced r = reduce(t, pi_p_);
    return r.cos_sign * sincos_principal(r.phi).c;
}

double pi_p(double p) { return GenTrigTable(p).pi(); }

double arcsin_p(double p, double x) { return GenTrigTable(p).arcsin(x); }

double sin_p(double p, double t) { return GenTrigTable(p).sin(t); }

double cos_p(double p, double t) { return GenTrigTable(p).cos(t); }

} // namespace plap
