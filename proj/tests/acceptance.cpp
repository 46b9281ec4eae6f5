// Acceptance gate: one line per criterion, nonzero exit if any fail.
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "plap/report.hpp"
#include "plap/sharpness.hpp"

using namespace plap;

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool g_all_pass = true;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %2d %-28s %s  %s\n", idx, name,
                pass ? "PASS" : "FAIL", detail.c_str());
    if (!pass) g_all_pass = false;
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), f, a, b);
    return buf;
}

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

const std::vector<double> kPs{1.5, 2.0, 3.0};
const std::vector<int> kNs{2, 3, 5};
const std::vector<double> kDs{0.5, 2.0, 10.0};

void criterion1() {
    double worst = 0.0;
    for (double p : {1.2, 1.5, 2.0, 3.0, 5.0}) {
        GenTrigTable trig(p, 256);
        std::mt19937 rng(12345);
        std::uniform_real_distribution<double> uni(-2.0 * trig.pi(),
                                                   2.0 * trig.pi());
        for (int i = 0; i < 1000; ++i) {
            const double t = uni(rng);
            const double s = std::abs(trig.sin(t));
            const double c = std::abs(trig.cos(t));
            worst = std::max(worst,
                             std::abs(std::pow(s, p) + std::pow(c, p) - 1.0));
        }
    }
    report(1, "p-trig identity", worst <= 1e-10,
           fmt("max identity defect %.3g (tol 1e-10)", worst));
}

void criterion2() {
    GenTrigTable trig(2.0, 256);
    double worst = std::abs(trig.pi() - kPi);
    for (int i = 0; i < 1000; ++i) {
        const double t = -2.0 * kPi + 4.0 * kPi * i / 999.0;
        worst = std::max(worst, std::abs(trig.sin(t) - std::sin(t)));
        worst = std::max(worst, std::abs(trig.cos(t) - std::cos(t)));
    }
    report(2, "classical reduction", worst <= 1e-10,
           fmt("max deviation from sin/cos/pi %.3g (tol 1e-10)", worst));
}

void criterion3() {
    double worst = 0.0;
    for (double p : kPs)
        for (int n : kNs)
            for (double D : kDs) {
                Model1D m({p, n, 0.0, D});
                const double expect =
                    (p - 1.0) * std::pow(m.trig().half_pi() / D, p);
                const double got = m.eigenvalue_from_D().lambda_bar;
                worst = std::max(worst, std::abs(got - expect) / expect);
            }
    report(3, "flat closed form", worst <= 1e-12,
           fmt("max rel error %.3g (tol 1e-12)", worst));
}

struct MatrixPoint {
    ModelParams params;
    double quad = 0.0, shoot = 0.0, rayleigh = 0.0;
};

std::vector<MatrixPoint> g_matrix; // filled by criterion4, reused by 5

void criterion4() {
    for (double p : kPs)
        for (int n : kNs)
            for (double D : kDs)
                g_matrix.push_back({{p, n, -1.0, D}, 0, 0, 0});
    parallel_for(g_matrix.size(), worker_count(), [&](std::size_t i) {
        Model1D m(g_matrix[i].params);
        g_matrix[i].quad = m.eigenvalue_from_D().lambda_bar;
        g_matrix[i].shoot = m.eigenvalue_shoot();
        g_matrix[i].rayleigh = m.rayleigh_min(4096);
    });
    double worst_pair = 0.0, worst_ray = -1e300;
    bool ray_above = true;
    for (const auto& pt : g_matrix) {
        worst_pair = std::max(worst_pair,
                              std::abs(pt.quad - pt.shoot) / pt.quad);
        worst_ray = std::max(worst_ray, (pt.rayleigh - pt.quad) / pt.quad);
        ray_above = ray_above && pt.rayleigh >= pt.quad * (1.0 - 1e-9);
    }
    report(4, "cross-method matrix",
           worst_pair <= 1e-6 && worst_ray <= 1e-3 && ray_above,
           fmt("max quad/shoot gap %.3g (tol 1e-6), max rayleigh excess %.3g "
               "(tol 1e-3)",
               worst_pair, worst_ray));
}

void criterion5() {
    const std::vector<double> cs{0.5, 2.0, 10.0};
    std::vector<std::pair<ModelParams, double>> jobs;
    for (const auto& pt : g_matrix)
        for (double c : cs) jobs.push_back({pt.params, c});
    std::vector<double> rel(jobs.size());
    parallel_for(jobs.size(), worker_count(), [&](std::size_t i) {
        auto [scaled, direct] = scaling_check(jobs[i].first, jobs[i].second);
        rel[i] = std::abs(scaled - direct) / direct;
    });
    double worst = 0.0;
    for (double r : rel) worst = std::max(worst, r);
    report(5, "scaling law", worst <= 1e-8,
           fmt("max rel mismatch %.3g (tol 1e-8)", worst));
}

void criterion6() {
    std::vector<double> lx, ly;
    for (double D : {1e-1, 1e-2, 1e-3, 1e-4}) {
        Model1D m({2.0, 2, -1.0, D});
        const double lam = m.eigenvalue_from_D().lambda_bar;
        const double lead = m.asymptotic_small_D();
        lx.push_back(std::log(D));
        ly.push_back(std::log(std::abs(lam - lead)));
    }
    const double slope = fit_slope(lx, ly);
    report(6, "small-D correction order", std::abs(slope - (-1.0)) <= 0.15,
           fmt("log-log slope %.4f (want -1 within 0.15)", slope));
}

void criterion7() {
    bool pass = true;
    double worst_slope_err = 0.0, worst_span = 0.0;
    std::vector<std::pair<double, int>> combos;
    for (double p : kPs)
        for (int n : {2, 3}) combos.push_back({p, n});
    std::vector<double> slope_err(combos.size()), span(combos.size());
    parallel_for(combos.size(), worker_count(), [&](std::size_t k) {
        const auto [p, n] = combos[k];
        std::vector<double> xs, ys, consts;
        for (double D : {20.0, 25.0, 30.0, 35.0, 40.0}) {
            Model1D m({p, n, -1.0, D});
            const double lam = m.eigenvalue_from_D().lambda_bar;
            xs.push_back(D);
            ys.push_back(std::log(lam));
            consts.push_back(std::log(lam) + (n - 1.0) * D);
        }
        const double slope = fit_slope(xs, ys);
        slope_err[k] = std::abs(slope - (-(n - 1.0))) / (n - 1.0);
        double lo = consts[0], hi = consts[0];
        for (double c : consts) {
            lo = std::min(lo, c);
            hi = std::max(hi, c);
        }
        span[k] = hi - lo;
    });
    for (std::size_t k = 0; k < combos.size(); ++k) {
        worst_slope_err = std::max(worst_slope_err, slope_err[k]);
        worst_span = std::max(worst_span, span[k]);
        pass = pass && slope_err[k] <= 0.02 && span[k] < 1.0;
    }
    report(7, "large-D decay rate", pass,
           fmt("max slope error %.3g (tol 0.02), max offset span %.3g "
               "(tol 1.0)",
               worst_slope_err, worst_span));
}

void criterion8() {
    double worst = 0.0;
    bool decreasing = true;
    for (double p : kPs) {
        Model1D m({p, 3, -1.0, 2.0});
        EigenSolution sol = m.eigenvalue_from_D();
        const double coarse = m.log_transform_residual(sol, 100);
        const double fine = m.log_transform_residual(sol, 300);
        worst = std::max(worst, m.log_transform_residual(sol, 4000));
        decreasing = decreasing && fine < coarse;
    }
    report(8, "log-transform identity", worst <= 1e-4 && decreasing,
           fmt("max scaled residual %.3g (tol 1e-4), decreasing under "
               "refinement: %.0f",
               worst, decreasing ? 1.0 : 0.0));
}

void criterion9() {
    double worst = -1e300;
    bool branches = true;
    for (double eps : {1e-1, 1e-2}) {
        for (int n : kNs) {
            WarpProfile wp(eps, n, 1.0);
            worst = std::max(worst, ricci_certificate(wp, 10000));
            // Closed-form branches: the inner residual cancels exactly and
            // the outer one is -(n-2)/f^2.
            const double x_in = 0.3 * eps;
            const double f_in = wp.f(x_in);
            const double r_in = wp.h_prime(x_in) +
                                (n - 1) * (wp.h(x_in) * wp.h(x_in) - 1.0) -
                                (n - 2) / (f_in * f_in);
            const double x_out = 2.0 * eps;
            const double f_out = wp.f(x_out);
            const double r_out = wp.h_prime(x_out) +
                                 (n - 1) * (wp.h(x_out) * wp.h(x_out) - 1.0) -
                                 (n - 2) / (f_out * f_out);
            branches = branches && std::abs(r_in) <= 1e-8 && r_out <= 0.0;
        }
    }
    report(9, "curvature certificate", worst <= 1e-6 && branches,
           fmt("max transition residual %.3g (tol 1e-6)", worst));
}

void criterion10() {
    const auto rows = convergence_study({1e-1, 1e-2, 1e-3}, 2.0, 2, 2.0);
    bool bracket = true, shrinking = true;
    double prev_gap = 1e300;
    for (const auto& r : rows) {
        bracket = bracket && r.lower <= r.upper * (1.0 + 1e-12);
        shrinking = shrinking && r.gap < prev_gap;
        prev_gap = r.gap;
    }
    const double final_rel = rows.back().gap / rows.back().lower;
    report(10, "sharpness bracket", bracket && shrinking && final_rel <= 0.02,
           fmt("upper/lower mismatch at smallest eps %.3g (tol 0.02), gap "
               "monotone: %.0f",
               final_rel, shrinking ? 1.0 : 0.0));
}

void criterion11() {
    // Strictness of the bound and non-attainment are proof facts, not
    // numerical ones; this suite asserts only the non-strict two-sided
    // bracket above, and records that limitation here.
    report(11, "strictness not certified", true,
           "non-strict bracket only; strict inequality is out of scope");
}

} // namespace

int main() {
    const struct {
        int idx;
        void (*fn)();
    } steps[] = {{1, criterion1}, {2, criterion2},  {3, criterion3},
                 {4, criterion4}, {5, criterion5},  {6, criterion6},
                 {7, criterion7}, {8, criterion8},  {9, criterion9},
                 {10, criterion10}, {11, criterion11}};
    for (const auto& step : steps) {
        try {
            step.fn();
        } catch (const std::exception& e) {
            report(step.idx, "unhandled exception", false, e.what());
        }
    }
    return g_all_pass ? 0 : 1;
}
