#include "plap/selftest.hpp"

#include <algorithm>
#include <cmath>

#include "plap/sharpness.hpp"

namespace plap {

namespace {

void add(std::vector<CheckResult>& out, const std::string& name,
         double residual, double threshold) {
    out.push_back({name, residual <= threshold, residual, threshold});
}

double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

} // namespace

std::vector<CheckResult> run_selftest(const SolverConfig& cfg) {
    std::vector<CheckResult> out;

    // Generalized-trig pythagorean identity and inversion.
    {
        double worst_id = 0.0, worst_inv = 0.0;
        for (double p : {1.5, 2.0, 3.0, 5.0}) {
            GenTrigTable trig(p, 256);
            for (int i = 0; i <= 200; ++i) {
                const double t = trig.pi() * (-1.0 + 2.0 * i / 200.0);
                const double s = trig.sin(t), c = trig.cos(t);
                worst_id = std::max(
                    worst_id, std::abs(std::pow(std::abs(s), p) +
                                       std::pow(std::abs(c), p) - 1.0));
            }
            for (int i = 0; i <= 50; ++i) {
                const double t = trig.half_pi() * i / 50.0;
                worst_inv =
                    std::max(worst_inv, std::abs(trig.arcsin(trig.sin(t)) - t));
            }
        }
        add(out, "gentrig-identity", worst_id, 1e-10);
        add(out, "gentrig-inversion", worst_inv, 1e-8);
    }

    // Classical reduction at p = 2.
    {
        GenTrigTable trig(2.0, 256);
        double worst = std::abs(trig.pi() - M_PI);
        for (int i = 0; i <= 100; ++i) {
            const double t = 2.0 * M_PI * i / 100.0 - M_PI;
            worst = std::max(worst, std::abs(trig.sin(t) - std::sin(t)));
            worst = std::max(worst, std::abs(trig.cos(t) - std::cos(t)));
        }
        add(out, "classical-p2", worst, 1e-10);
    }

    // K = 0 closed form.
    {
        double worst = 0.0;
        for (double p : {1.5, 2.0, 3.0})
            for (double D : {0.5, 2.0}) {
                Model1D model(ModelParams{p, 2, 0.0, D}, cfg);
                const double expect =
                    (p - 1.0) * std::pow(pi_p(p) / (2.0 * D), p);
                worst = std::max(worst,
                                 rel_diff(model.eigenvalue_from_D().lambda_bar,
                                          expect));
            }
        add(out, "k0-closed-form", worst, 1e-12);
    }

    // Cross-method agreement on a reduced matrix.
    {
        double worst_shoot = 0.0, worst_ray = -1.0;
        for (double p : {1.5, 2.0})
            for (int n : {2, 3})
                for (double D : {0.5, 2.0}) {
                    Model1D model(ModelParams{p, n, -1.0, D}, cfg);
                    const double quad = model.eigenvalue_from_D().lambda_bar;
                    worst_shoot = std::max(
                        worst_shoot, rel_diff(quad, model.eigenvalue_shoot()));
                    const double ray = model.rayleigh_min(1024);
                    worst_ray = std::max(worst_ray, (ray - quad) / quad);
                }
        add(out, "cross-method-spread", worst_shoot, 1e-6);
        add(out, "rayleigh-upper-bound", worst_ray, 1e-2);
    }

    // Scaling law.
    {
        double worst = 0.0;
        for (double c : {0.5, 2.0}) {
            const auto [lhs, rhs] =
                scaling_check(ModelParams{2.0, 3, -1.0, 2.0}, c, cfg);
            worst = std::max(worst, rel_diff(lhs, rhs));
        }
        add(out, "scaling-law", worst, 1e-8);
    }

    // Small-D ratio to the leading term.
    {
        Model1D model(ModelParams{2.0, 2, -1.0, 1e-3}, cfg);
        const double ratio = model.eigenvalue_from_D().lambda_bar /
                             model.asymptotic_small_D();
        add(out, "small-D-asymptotic", std::abs(ratio - 1.0), 1e-3);
    }

    // Large-D log slope.
    {
        double l20 = 0.0, l40 = 0.0;
        {
            Model1D m(ModelParams{2.0, 2, -1.0, 20.0}, cfg);
            l20 = std::log(m.eigenvalue_from_D().lambda_bar);
        }
        {
            Model1D m(ModelParams{2.0, 2, -1.0, 40.0}, cfg);
            l40 = std::log(m.eigenvalue_from_D().lambda_bar);
        }
        const double slope = (l40 - l20) / 20.0;
        add(out, "large-D-asymptotic", std::abs(slope + 1.0), 0.02);
    }

    // Barta identity residual of the computed eigenfunction.
    {
        Model1D model(ModelParams{2.0, 2, -1.0, 2.0}, cfg);
        const EigenSolution sol = model.eigenvalue_from_D();
        add(out, "barta-residual", model.log_transform_residual(sol), 1e-4);
    }

    // Ricci certificate on the warp transition.
    {
        double worst = -1.0;
        for (int n : {2, 3})
            worst = std::max(worst, ricci_certificate(WarpProfile(0.1, n, 3.0),
                                                      4000));
        add(out, "ricci-certificate", worst, 1e-6);
    }

    // Sharpness bracket: lower <= upper at a coarse eps.
    {
        const auto rows = convergence_study({0.05}, 2.0, 2, 2.0, cfg);
        add(out, "sharpness-bracket", -rows.front().gap, 0.0);
    }

    return out;
}

} // namespace plap
