#include "plap/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace plap {

namespace {

// 15-point Kronrod nodes on [-1, 1] (odd nodes are the embedded 7-point
// Gauss rule). Values from QUADPACK.
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};

constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};

constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct PanelResult {
    double integral;
    double error;
    bool finite;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
        fv[i] = f(mid - dx);
        fv[14 - i] = f(mid + dx);
    }
    fv[7] = f(mid);

    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 7; ++i) {
        const double pair = fv[i] + fv[14 - i];
        kron += kKronrodWeights[static_cast<std::size_t>(i)] * pair;
        if (i % 2 == 1)
            gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * pair;
    }
    kron += kKronrodWeights[7] * fv[7];
    gauss += kGaussWeights[3] * fv[7];

    PanelResult r;
    r.integral = half * kron;
    r.finite = std::isfinite(r.integral);
    // QUADPACK-style sharpened error estimate.
    const double diff = std::abs(kron - gauss) * half;
    r.error = diff;
    if (diff > 0.0) {
        double resasc = 0.0;
        const double mean = kron / 2.0; // crude center for scale only
        for (int i = 0; i < 15; ++i) resasc += std::abs(fv[i] - mean);
        resasc *= std::abs(half) / 15.0;
        if (resasc > 0.0)
            r.error = resasc * std::min(1.0, std::pow(200.0 * diff / resasc, 1.5));
    }
    return r;
}

struct Cell {
    double a, b;
    double integral, error;
    bool operator<(const Cell& o) const { return error < o.error; }
};

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol) {
    tol.validate();
    if (!(a <= b)) throw DomainError("integrate: requires a <= b");
    if (a == b) return 0.0;

    const double eps = std::numeric_limits<double>::epsilon();
    const double width_floor =
        8.0 * eps * std::max({std::abs(a), std::abs(b), 1.0});

    // Sentinel for panels with non-finite values: large but safely summable.
    const double kBadPanel = 1e300;

    std::priority_queue<Cell> cells;
    double total = 0.0;
    double total_err = 0.0;
    auto push = [&](double lo, double hi) {
        PanelResult r = gk15(f, lo, hi);
        Cell c{lo, hi, r.integral, r.error};
        if (!r.finite) {
            // Non-finite panel (e.g. an integrable singularity evaluated at
            // an underflowed node). Below the width floor the contribution
            // is dropped; otherwise keep splitting toward the bad point.
            c.integral = 0.0;
            c.error = (hi - lo <= width_floor) ? 0.0 : kBadPanel;
        }
        total += c.integral;
        total_err += c.error;
        cells.push(c);
    };
    push(a, b);

    std::size_t splits = 0;
    while (total_err > std::max(tol.abs, tol.rel * std::abs(total))) {
        if (splits++ >= tol.max_iter)
            throw NonConvergence("integrate: error target not met within "
                                 "max_iter subdivisions");
        Cell worst = cells.top();
        cells.pop();
        total -= worst.integral;
        total_err -= worst.error;
        if (worst.b - worst.a <= width_floor) {
            // Cannot refine further in double precision; accept as-is.
            worst.error = 0.0;
            total += worst.integral;
            cells.push(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        push(worst.a, mid);
        push(mid, worst.b);
    }
    return total;
}

double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const Tolerance& tol) {
    tol.validate();
    bracket.check();

    double a = bracket.lo, b = bracket.hi;
    double fa = bracket.f_lo, fb = bracket.f_hi;
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;

    double c = a, fc = fa;
    double d = b - a, e = d;
    const double eps = std::numeric_limits<double>::epsilon();

    for (std::size_t iter = 0; iter < tol.max_iter; ++iter) {
        if ((fb > 0.0) == (fc > 0.0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::abs(fc) < std::abs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        const double tol1 =
            2.0 * eps * std::abs(b) + 0.5 * std::max(tol.abs, tol.rel * std::abs(b));
        const double xm = 0.5 * (c - b);
        if (std::abs(xm) <= tol1 || fb == 0.0) return b;

        if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
            // Inverse quadratic interpolation / secant.
            const double s = fb / fa;
            double pq_p, pq_q;
            if (a == c) {
                pq_p = 2.0 * xm * s;
                pq_q = 1.0 - s;
            } else {
                const double q = fa / fc;
                const double r = fb / fc;
                pq_p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0));
                pq_q = (q - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (pq_p > 0.0) pq_q = -pq_q;
            pq_p = std::abs(pq_p);
            if (2.0 * pq_p < std::min(3.0 * xm * pq_q - std::abs(tol1 * pq_q),
                                      std::abs(e * pq_q))) {
                e = d;
                d = pq_p / pq_q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += (std::abs(d) > tol1) ? d : (xm > 0.0 ? tol1 : -tol1);
        fb = f(b);
    }
    throw NonConvergence("find_root: max_iter exceeded");
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)
// ---------------------------------------------------------------------------

namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                 a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

OdeState hermite(double s, double h, const OdeState& y0, const OdeState& f0,
                 const OdeState& y1, const OdeState& f1) {
    // s in [0,1] across the step of width h.
    const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
    const double h10 = s * (1 - s) * (1 - s);
    const double h01 = s * s * (3 - 2 * s);
    const double h11 = s * s * (s - 1);
    OdeState out(y0.size());
    for (std::size_t i = 0; i < y0.size(); ++i)
        out[i] = h00 * y0[i] + h * h10 * f0[i] + h01 * y1[i] + h * h11 * f1[i];
    return out;
}

} // namespace

OdeState Trajectory::at(double ti) const {
    if (t.size() < 2) return y.front();
    if (ti <= t.front()) return y.front();
    if (ti >= t.back()) return y.back();
    auto it = std::upper_bound(t.begin(), t.end(), ti);
    const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
    const double h = t[k + 1] - t[k];
    const double s = (ti - t[k]) / h;
    return hermite(s, h, y[k], dy[k], y[k + 1], dy[k + 1]);
}

double Trajectory::at(double ti, std::size_t component) const {
    return at(ti)[component];
}

Trajectory ode_solve(const OdeRhs& rhs, double t0, OdeState y0, double t1,
                     const OdeOptions& opts, const OdeEvent* event) {
    if (!(t0 < t1)) throw DomainError("ode_solve: requires t0 < t1");
    const std::size_t dim = y0.size();
    const double eps = std::numeric_limits<double>::epsilon();

    Trajectory traj;
    OdeState k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim);
    OdeState ytmp(dim), ynew(dim);

    rhs(t0, y0, k1);
    traj.t.push_back(t0);
    traj.y.push_back(y0);
    traj.dy.push_back(k1);

    double ev_prev = 0.0;
    if (event) ev_prev = event->value(t0, y0);

    // Initial step: conservative fraction of the interval.
    double h = std::min((t1 - t0) / 100.0, opts.max_step);
    double t = t0;
    OdeState y = y0;

    std::size_t nsteps = 0;
    while (t < t1) {
        if (++nsteps > opts.max_steps)
            throw NonConvergence("ode_solve: max_steps exceeded");
        h = std::min({h, t1 - t, opts.max_step});
        if (h < 16.0 * eps * std::max(std::abs(t), 1.0))
            throw StepSizeUnderflow("ode_solve: step size underflow");

        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * a21 * k1[i];
        rhs(t + c2 * h, ytmp, k2);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        rhs(t + c3 * h, ytmp, k3);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(t + c4 * h, ytmp, k4);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] +
                                  a54 * k4[i]);
        rhs(t + c5 * h, ytmp, k5);
        for (std::size_t i = 0; i < dim; ++i)
            ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                  a64 * k4[i] + a65 * k5[i]);
        rhs(t + h, ytmp, k6);
        for (std::size_t i = 0; i < dim; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        rhs(t + h, ynew, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc =
                opts.abs + opts.rel * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / static_cast<double>(dim));

        if (err <= 1.0) {
            const double t_new = t + h;
            traj.t.push_back(t_new);
            traj.y.push_back(ynew);
            traj.dy.push_back(k7);
            ++traj.steps_accepted;

            if (event) {
                const double ev_new = event->value(t_new, ynew);
                if ((ev_prev < 0.0 && ev_new >= 0.0) ||
                    (ev_prev > 0.0 && ev_new <= 0.0)) {
                    // Locate the crossing on the Hermite interpolant.
                    const OdeState& yl = traj.y[traj.y.size() - 2];
                    const OdeState& fl = traj.dy[traj.dy.size() - 2];
                    auto g = [&](double tau) {
                        const double s = (tau - t) / h;
                        return event->value(tau,
                                            hermite(s, h, yl, fl, ynew, k7));
                    };
                    double te = find_root(g, Bracket{t, t_new, ev_prev, ev_new},
                                          Tolerance{1e-14, 1e-15, 200});
                    traj.event_hit = true;
                    traj.event_time = te;
                    const double s = (te - t) / h;
                    traj.t.back() = te;
                    traj.y.back() = hermite(s, h, yl, fl, ynew, k7);
                    rhs(te, traj.y.back(), traj.dy.back());
                    return traj;
                }
                ev_prev = ev_new;
            }

            t = t_new;
            y = ynew;
            k1 = k7; // FSAL
        } else {
            ++traj.steps_rejected;
        }

        const double fac =
            0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
    }

    if (event)
        throw EventNotReached("ode_solve: event did not occur before t1");
    return traj;
}

} // namespace plap
