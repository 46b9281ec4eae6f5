#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "plap/errors.hpp"

namespace plap {

/// Signed power x^(q) = |x|^(q-1) * x, with 0^(q) = 0 for every q > 0.
/// Odd and monotone in x.
inline double signed_pow(double x, double q) {
    if (x == 0.0) return 0.0;
    return x < 0.0 ? -std::pow(-x, q) : std::pow(x, q);
}

struct Tolerance {
    double rel = 1e-10;
    double abs = 1e-14;
    std::size_t max_iter = 4000;

    void validate() const {
        if (!(rel > 0.0)) throw DomainError("Tolerance: rel must be > 0");
        if (!(abs >= 0.0)) throw DomainError("Tolerance: abs must be >= 0");
        if (max_iter < 1) throw DomainError("Tolerance: max_iter must be >= 1");
    }
};

struct Bracket {
    double lo, hi;
    double f_lo, f_hi;

    /// Evaluates f at both ends; throws InvalidBracket if the signs agree.
    template <class F>
    static Bracket make(F&& f, double lo, double hi) {
        if (!(lo < hi)) throw InvalidBracket("Bracket: lo must be < hi");
        Bracket b{lo, hi, f(lo), f(hi)};
        b.check();
        return b;
    }

    void check() const {
        if (!(lo < hi)) throw InvalidBracket("Bracket: lo must be < hi");
        if (!std::isfinite(f_lo) || !std::isfinite(f_hi))
            throw InvalidBracket("Bracket: non-finite endpoint values");
        if ((f_lo > 0.0) == (f_hi > 0.0) && f_lo != 0.0 && f_hi != 0.0)
            throw InvalidBracket("Bracket: no sign change on [lo, hi]");
    }
};

/// Adaptive Gauss-Kronrod (7-15) quadrature of f on [a, b].
/// Refines the worst interval first until the global error estimate is
/// below max(tol.abs, tol.rel * |I|). Interval subdivision makes mildly
/// singular (integrable, Holder-type) endpoints converge; all nodes are
/// interior so the endpoints themselves are never evaluated.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const Tolerance& tol = {});

/// Bracketed root-finding: Brent's method (inverse quadratic / secant with
/// a bisection safeguard). Always converges for a valid bracket.
/// Stops when the bracket width is below max(tol.abs, tol.rel * |x|).
double find_root(const std::function<double(double)>& f, Bracket bracket,
                 const Tolerance& tol = {1e-12, 0.0, 200});

// ---------------------------------------------------------------------------
// Explicit adaptive ODE stepping (Dormand-Prince 5(4)) with event stopping.
// ---------------------------------------------------------------------------

using OdeState = std::vector<double>;
using OdeRhs = std::function<void(double t, const OdeState& y, OdeState& dydt)>;

struct OdeOptions {
    double rel = 1e-9;
    double abs = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t max_steps = 1000000;
};

/// Scalar functional of the state; integration stops at its first zero
/// crossing after t0 (located on the dense output, then polished).
struct OdeEvent {
    std::function<double(double t, const OdeState& y)> value;
};

/// Accepted step endpoints plus derivatives; dense output by cubic Hermite
/// interpolation on each step.
struct Trajectory {
    std::vector<double> t;
    std::vector<OdeState> y;
    std::vector<OdeState> dy;

    bool event_hit = false;
    double event_time = std::numeric_limits<double>::quiet_NaN();

    std::size_t steps_accepted = 0;
    std::size_t steps_rejected = 0;

    double t_begin() const { return t.front(); }
    double t_end() const { return t.back(); }
    const OdeState& y_end() const { return y.back(); }

    /// Dense evaluation at ti (must lie within [t_begin, t_end]).
    OdeState at(double ti) const;
    double at(double ti, std::size_t component) const;
};

Trajectory ode_solve(const OdeRhs& rhs, double t0, OdeState y0, double t1,
                     const OdeOptions& opts = {},
                     const OdeEvent* event = nullptr);

} // namespace plap
