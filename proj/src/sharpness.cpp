#include "plap/sharpness.hpp"

#include <algorithm>
#include <cmath>

namespace plap {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// Bump primitive B(t) = exp(-1/t) for t > 0, else 0, and its derivative.
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

double bump_deriv(double t) {
    return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0;
}

} // namespace

Cutoff::Cutoff(double eps) : eps_(eps) {
    if (!(eps > 0.0)) throw DomainError("Cutoff: requires eps > 0");
}

double Cutoff::value(double x) const {
    const double tau = (x - 0.5 * eps_) / (0.5 * eps_);
    if (tau <= 0.0) return 0.0;
    if (tau >= 1.0) return 1.0;
    const double b0 = bump(tau);
    const double b1 = bump(1.0 - tau);
    return b0 / (b0 + b1);
}

double Cutoff::deriv(double x) const {
    const double tau = (x - 0.5 * eps_) / (0.5 * eps_);
    if (tau <= 0.0 || tau >= 1.0) return 0.0;
    const double b0 = bump(tau);
    const double b1 = bump(1.0 - tau);
    const double sum = b0 + b1;
    const double ds = (bump_deriv(tau) * b1 + b0 * bump_deriv(1.0 - tau)) /
                      (sum * sum);
    return ds * 2.0 / eps_;
}

WarpProfile::WarpProfile(double eps, int n, double x_max, std::size_t grid)
    : eps_(eps), n_(n), x_max_(x_max), cutoff_(eps) {
    if (!(eps > 0.0) || eps > 0.25)
        throw DomainError("WarpProfile: requires 0 < eps <= 0.25");
    if (n < 2) throw DomainError("WarpProfile: requires n >= 2");
    if (!(x_max > eps)) throw DomainError("WarpProfile: x_max must exceed eps");

    delta_ = std::sinh(0.5 * eps_) * std::exp(transition_log(eps_) + eps_);

    grid_.resize(grid + 1);
    for (std::size_t i = 0; i <= grid; ++i) {
        const double x = x_max_ * static_cast<double>(i) /
                         static_cast<double>(grid);
        grid_[i] = {x, psi(x), h(x), f(x), h(x) * f(x)};
    }
}

double WarpProfile::h(double x) const {
    if (x >= eps_) return -1.0;
    const double c = 1.0 / std::tanh(x);
    if (x <= 0.5 * eps_) return c;
    const double ps = cutoff_.value(x);
    return (1.0 - ps) * c - ps;
}

double WarpProfile::h_prime(double x) const {
    if (x >= eps_) return 0.0;
    const double sh = std::sinh(x);
    const double csch2 = 1.0 / (sh * sh);
    if (x <= 0.5 * eps_) return -csch2;
    const double ps = cutoff_.value(x);
    const double dps = cutoff_.deriv(x);
    return -dps * (1.0 / std::tanh(x) + 1.0) - (1.0 - ps) * csch2;
}

double WarpProfile::transition_log(double x) const {
    // Direct quadrature per call: the curvature certificate cancels terms of
    // size csch^2(eps/2), so f needs near-machine accuracy and a dense-output
    // interpolant of the integral is not good enough (the bump derivatives
    // are enormous against any step the integrator accepts).
    if (x <= 0.5 * eps_) return 0.0;
    return integrate([this](double t) { return h(t); }, 0.5 * eps_,
                     std::min(x, eps_), Tolerance{1e-14, 1e-16, 20000});
}

double WarpProfile::f(double x) const {
    if (x <= 0.5 * eps_) return std::sinh(x);
    if (x >= eps_) return delta_ * std::exp(-x);
    return std::sinh(0.5 * eps_) * std::exp(transition_log(x));
}

WarpProfile build_warp(double eps, int n, double x_max, std::size_t grid) {
    return WarpProfile(eps, n, x_max, grid);
}

double ricci_certificate(const WarpProfile& profile, std::size_t grid_size) {
    if (grid_size < 2) throw DomainError("ricci_certificate: empty grid");
    const double eps = profile.epsilon();
    const int n = profile.dim();
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= grid_size; ++i) {
        const double x = 0.5 * eps +
                         0.5 * eps * static_cast<double>(i) /
                             static_cast<double>(grid_size);
        const double h = profile.h(x);
        const double fx = profile.f(x);
        const double resid = profile.h_prime(x) + (n - 1) * (h * h - 1.0) -
                             (n - 2) / (fx * fx);
        worst = std::max(worst, resid);
    }
    return worst;
}

DomainSpec domain_for(double delta, double D_target) {
    if (!(delta > 0.0) || !(D_target > 0.0))
        throw DomainError("domain_for: requires delta > 0, D_target > 0");
    DomainSpec spec;
    spec.R_eps = D_target - delta - kPi * delta * std::exp(delta - 1.0);
    spec.D_lo = spec.R_eps;
    spec.D_hi = D_target;
    if (!(spec.R_eps > 0.0))
        throw DomainError("domain_for: eps too large for this target "
                          "diameter (R_eps <= 0)");
    return spec;
}

double sphere_area(int n) {
    if (n < 2) throw DomainError("sphere_area: requires n >= 2");
    return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

double radial_integral(const WarpProfile& profile,
                       const std::function<double(double)>& g, double p,
                       int n, double lo, double hi) {
    // Piecewise split at the warp transition so each piece is smooth.
    const double eps = profile.epsilon();
    // Absolute floor matters: near r = 0 the integrand sits at interpolation
    // noise level and a pure relative target can never be met there.
    const Tolerance tol{1e-11, 1e-16, 20000};
    auto integrand = [&](double r) {
        return g(r) * std::pow(profile.f(r), n - 1);
    };
    double total = 0.0;
    double cuts[4] = {lo, std::min(hi, 0.5 * eps), std::min(hi, eps), hi};
    for (int k = 0; k < 3; ++k) {
        if (cuts[k + 1] > cuts[k])
            total += integrate(integrand, cuts[k], cuts[k + 1], tol);
    }
    (void)p;
    return total;
}

} // namespace

QuotientResult quotient_on_domain(const WarpProfile& profile,
                                  const EigenSolution& w, double p,
                                  double R_eps) {
    if (!(R_eps > 0.0) || R_eps > profile.x_max())
        throw DomainError("quotient_on_domain: R_eps outside profile grid");
    const int n = profile.dim();
    const double area = sphere_area(n);
    auto num_g = [&](double r) {
        return std::pow(std::abs(w.dw_at(R_eps - r)), p);
    };
    auto den_g = [&](double r) {
        return std::pow(std::abs(w.w_at(R_eps - r)), p);
    };
    QuotientResult out;
    out.numerator = area * radial_integral(profile, num_g, p, n, 0.0, R_eps);
    out.denominator = area * radial_integral(profile, den_g, p, n, 0.0, R_eps);
    if (!(out.denominator > 0.0))
        throw ZeroDenominator("quotient_on_domain: vanishing denominator "
                              "(integration failure)");
    out.quotient = out.numerator / out.denominator;
    return out;
}

std::pair<double, double> cap_integrals(const WarpProfile& profile,
                                        const EigenSolution& w, double p,
                                        double R_eps) {
    const int n = profile.dim();
    const double area = sphere_area(n);
    auto num_g = [&](double r) {
        return std::pow(std::abs(w.dw_at(R_eps - r)), p);
    };
    auto den_g = [&](double r) {
        return std::pow(std::abs(w.w_at(R_eps - r)), p);
    };
    const double eps = profile.epsilon();
    return {area * radial_integral(profile, num_g, p, n, 0.0, eps),
            area * radial_integral(profile, den_g, p, n, 0.0, eps)};
}

std::vector<ConvergenceRow> convergence_study(
    const std::vector<double>& eps_list, double p, int n, double D_target,
    const SolverConfig& cfg) {
    if (eps_list.empty())
        throw DomainError("convergence_study: empty eps list");

    // Lower bracket at the worst-case diameter D_eps = D_target.
    Model1D reference(ModelParams{p, n, -1.0, D_target}, cfg);
    const double lower = reference.eigenvalue_from_D().lambda_bar;

    std::vector<ConvergenceRow> rows;
    rows.reserve(eps_list.size());
    for (double eps : eps_list) {
        WarpProfile profile(eps, n, D_target + 1.0);
        const DomainSpec spec = domain_for(profile.delta(), D_target);
        Model1D model(ModelParams{p, n, -1.0, spec.R_eps}, cfg);
        const EigenSolution w = model.eigenvalue_from_D();
        const QuotientResult q = quotient_on_domain(profile, w, p, spec.R_eps);
        rows.push_back({eps, profile.delta(), spec.R_eps, lower, q.quotient,
                        q.quotient - lower});
    }
    return rows;
}

} // namespace plap
