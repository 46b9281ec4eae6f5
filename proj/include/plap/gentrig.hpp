#pragma once

#include <cstddef>
#include <vector>

#include "plap/numerics.hpp"

namespace plap {

/// Generalized trigonometric functions for an exponent p > 1:
/// arcsin_p(x) = int_0^x (1 - t^p)^(-1/p) dt, sin_p its inverse extended to
/// an odd 2*pi_p-periodic function, cos_p = sin_p', and the half-period
/// constant pi_p = 2 pi / (p sin(pi/p)).
///
/// Immutable after construction; evaluations are read-only and safe to
/// share across threads.
class GenTrigTable {
public:
    /// grid > 0 precomputes a monotone (phi, sin) table on [0, pi_p/2] used
    /// as the Newton starting guess for bulk evaluation.
    explicit GenTrigTable(double p, std::size_t grid = 0);

    double p() const { return p_; }
    double pi() const { return pi_p_; }
    double half_pi() const { return half_pi_; }

    /// Principal branch, x in [0, 1].
    double arcsin(double x) const;

    /// Odd 2*pi_p-periodic extension, any real t.
    double sin(double t) const;
    double cos(double t) const;

    struct SinCos {
        double s, c;
    };
    /// Both values on the principal quadrant phi in [0, pi_p/2]. Stable at
    /// both ends: near pi_p/2 the pair is computed through the complementary
    /// integral in cos, avoiding the 1 - sin^p cancellation.
    SinCos sincos_principal(double phi) const;

    /// Both values at phi = pi_p/2 - psi, computed as a function of the
    /// distance psi from the top so the result stays relative-accurate for
    /// psi far below rounding scale of pi_p/2.
    SinCos sincos_from_top(double psi) const;

private:
    double one_minus_pow(double x) const; // 1 - x^p without cancellation
    double arcsin_direct(double x) const; // quadrature from 0, x <= split
    double comp_arc(double c) const;      // pi_p/2 - phi as a function of cos
    double sin_from_phi(double phi) const;
    double cos_from_psi(double psi) const;
    double grid_guess(double phi) const;

    double p_;
    double pi_p_;
    double half_pi_;
    double x_split_;   // sin value separating the two evaluation branches
    double phi_split_; // arcsin(x_split_)
    double c_split_;   // cos value at the split
    std::vector<double> grid_phi_;
    std::vector<double> grid_sin_;
};

// Convenience free functions (construct a throwaway table; prefer holding a
// GenTrigTable in loops).
double pi_p(double p);
double arcsin_p(double p, double x);
double sin_p(double p, double t);
double cos_p(double p, double t);

} // namespace plap
