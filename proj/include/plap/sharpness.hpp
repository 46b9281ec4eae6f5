#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "plap/model1d.hpp"

namespace plap {

/// Smooth monotone step: 0 on [0, eps/2], 1 on [eps, inf), built from the
/// standard exponential-of-reciprocal bump, so psi' >= 0 everywhere and all
/// derivatives vanish at the plateaus.
class Cutoff {
public:
    explicit Cutoff(double eps);
    double eps() const { return eps_; }
    double value(double x) const;
    double deriv(double x) const;

private:
    double eps_;
};

/// Sampled warping profile f_eps with f = sinh on [0, eps/2] and
/// f = delta e^{-x} on [eps, x_max], glued through
/// f(x) = sinh(eps/2) exp int_{eps/2}^x h with
/// h = (1 - psi) coth x - psi.
class WarpProfile {
public:
    WarpProfile(double eps, int n, double x_max, std::size_t grid = 2048);

    double epsilon() const { return eps_; }
    double delta() const { return delta_; }
    int dim() const { return n_; }
    double x_max() const { return x_max_; }
    const Cutoff& cutoff() const { return cutoff_; }

    double psi(double x) const { return cutoff_.value(x); }
    double h(double x) const;
    double h_prime(double x) const; // analytic, chain rule on the bump
    double f(double x) const;

    struct Sample {
        double x, psi, h, f, f_prime;
    };
    const std::vector<Sample>& grid() const { return grid_; }

private:
    double transition_log(double x) const; // int_{eps/2}^x h, x in [eps/2, eps]

    double eps_;
    int n_;
    double x_max_;
    double delta_;
    Cutoff cutoff_;
    std::vector<Sample> grid_;
};

WarpProfile build_warp(double eps, int n, double x_max,
                       std::size_t grid = 2048);

/// Max over a dense grid of [eps/2, eps] of the curvature residual
///   h' + (n-1)(h^2 - 1) - (n-2)/f^2.
/// Non-positive (up to grid tolerance) iff Ric >= -(n-1) on the warped
/// product; outside the transition the inequality holds branch-wise.
double ricci_certificate(const WarpProfile& profile,
                         std::size_t grid_size = 10000);

struct DomainSpec {
    double R_eps; // ball radius D_target - delta - pi delta e^{delta - 1}
    double D_lo;  // diameter bracket endpoints: D_lo <= D_eps <= D_hi
    double D_hi;
};

DomainSpec domain_for(double delta, double D_target);

/// Surface measure of the unit (n-1)-sphere, 2 pi^{n/2} / Gamma(n/2).
double sphere_area(int n);

struct QuotientResult {
    double quotient;   // upper bound on lambda_{1,p}(Omega_eps)
    double numerator;  // full weighted integrals, omega_{n-1} included
    double denominator;
};

/// Rayleigh quotient of the radial test function v(x) = w(R_eps - r(x)) on
/// the geodesic ball of radius R_eps; w must be the model solution for
/// D = R_eps, K = -1, normalized to w(D) = 1.
QuotientResult quotient_on_domain(const WarpProfile& profile,
                                  const EigenSolution& w, double p,
                                  double R_eps);

/// The cap contributions C1, C2 (integrals over r in [0, eps]); both vanish
/// as eps -> 0.
std::pair<double, double> cap_integrals(const WarpProfile& profile,
                                        const EigenSolution& w, double p,
                                        double R_eps);

struct ConvergenceRow {
    double eps;
    double delta;
    double R_eps;
    double lower; // lambda_bar at the worst-case diameter D_target
    double upper; // quotient_on_domain
    double gap;   // upper - lower
};

/// Sweeps eps_list (decreasing) at K = -1 and reports the two-sided bracket
/// closing onto lambda_bar_{D_target, -1, n}.
std::vector<ConvergenceRow> convergence_study(
    const std::vector<double>& eps_list, double p, int n, double D_target,
    const SolverConfig& cfg = {});

} // namespace plap
