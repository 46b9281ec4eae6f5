#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "plap/gentrig.hpp"
#include "plap/numerics.hpp"

namespace plap {

/// The quadruple (p, n, K, D) defining one model instance.
struct ModelParams {
    double p;
    int n;
    double K; // curvature lower bound, K <= 0 (K = 0 is the closed-form limit)
    double D; // diameter, > 0

    void validate() const;

    /// (n-1) sqrt(-K), the drift coefficient of the model equation.
    double drift() const;
    /// (n-1) sqrt(-K) / (p-1), the beta of the phase equation.
    double beta() const;
};

enum class Method {
    QuadratureInversion,
    PruferShoot,
    DirectShoot,
    RayleighMin,
};

std::string method_name(Method m);

struct ProfilePoint {
    double t, w, dw;
};

struct EigenSolution {
    double lambda_bar = 0.0;
    double alpha = 0.0;
    Method method = Method::QuadratureInversion;
    /// Uniformly sampled eigenfunction, normalized to w(D) = 1.
    std::vector<ProfilePoint> profile;

    struct Diagnostics {
        double end_slope = 0.0;      // |dw(D)| relative to max |dw|
        double rayleigh_of_w = 0.0;  // weighted quotient of the profile
        double cross_method_spread = 0.0;
    } diag;

    /// Cubic Hermite interpolation of (w, dw) on the stored profile.
    double w_at(double t) const;
    double dw_at(double t) const;
};

struct ShootResult {
    std::vector<ProfilePoint> profile; // raw, w'(0) = 1 scaling
    double end_slope;                  // dw(D)
    double w_end;                      // w(D) before normalization
};

struct SolverConfig {
    Tolerance quad_tol{1e-12, 1e-15, 20000};
    Tolerance root_tol{1e-13, 0.0, 300};
    OdeOptions ode{1e-11, 1e-14};
    std::size_t profile_samples = 2001;
};

/// The one-dimensional model on [0, D]:
///   (dw^(p-1))' + (n-1) sqrt(-K) dw^(p-1) + lambda w^(p-1) = 0,
///   w(0) = 0, dw(D) = 0,
/// solved for the smallest positive eigenvalue by three independent routes.
class Model1D {
public:
    explicit Model1D(ModelParams params, SolverConfig cfg = {});

    const ModelParams& params() const { return params_; }
    const GenTrigTable& trig() const { return trig_; }

    /// F(phi) = beta * cos_p^(p-1)(phi) * sin_p(phi), the phase-equation
    /// nonlinearity on [0, pi_p/2].
    double phase_drift(double phi) const;

    /// D(alpha): quadrature of the first-crossing duration
    ///   int_0^{pi_p/2} dphi / (alpha + F(phi)),
    /// strictly decreasing in alpha; equals pi_p/(2 alpha) when K = 0.
    double duration_from_alpha(double alpha) const;

    /// Same duration obtained by integrating the phase equation
    /// phi' = alpha + F(phi) with an event stop at phi = pi_p/2.
    double prufer_shoot(double alpha) const;

    /// Primary eigenvalue route: invert D(alpha) = D by bracketed
    /// root-finding, then reconstruct the eigenfunction by direct shooting.
    EigenSolution eigenvalue_from_D() const;

    /// Verification route: invert the ODE event time instead.
    double eigenvalue_shoot() const;

    /// Integrate the first-order system w' = v^(1/(p-1)),
    /// v' = -(n-1)sqrt(-K) v - lambda w^(p-1) from (0, 1) over [0, D].
    ShootResult direct_shoot(double lambda) const;

    /// Weighted Rayleigh quotient of a piecewise-linear u with u(0) = 0,
    /// given by its nodes (t must be strictly increasing, t.front() = 0).
    double rayleigh_quotient(const std::vector<double>& t,
                             const std::vector<double>& u) const;

    /// Minimize the discretized quotient over piecewise-linear u on a
    /// uniform grid (u(0) = 0, free at D). Converges to lambda_bar from
    /// above as the grid refines. Nested grid refinement with warm starts,
    /// so doubling grid_size never increases the result.
    double rayleigh_min(std::size_t grid_size) const;

    /// Max scaled residual of the Riccati identity satisfied by
    /// f = -ln w:  (df^(p-1))' + (n-1)sqrt(-K) df^(p-1) - lambda
    ///             - (p-1)|df|^p = 0,
    /// evaluated by finite differences on an interior grid (t >= 0.05 D).
    double log_transform_residual(const EigenSolution& sol,
                                  std::size_t grid_size = 4000) const;

    /// Leading small-D term (p-1) (pi_p / (2D))^p.
    double asymptotic_small_D() const;

    /// Predicted log-eigenvalue -(n-1) sqrt(-K) D for large D.
    double asymptotic_large_D() const;

    /// McKean comparison value ((n-1) sqrt(-K)/p)^p. Assumes a sectional
    /// curvature upper bound, so no ordering with lambda_bar is implied.
    double mckean_bound() const;

private:
    double lambda_of_alpha(double alpha) const;
    Bracket alpha_bracket(const std::function<double(double)>& f) const;
    EigenSolution package_solution(double alpha, Method method) const;

    ModelParams params_;
    SolverConfig cfg_;
    GenTrigTable trig_;
};

/// (lambda_bar(p, n, c^2 K, D/c), c^p lambda_bar(p, n, K, D)); the two agree
/// to solver tolerance for every c > 0.
std::pair<double, double> scaling_check(const ModelParams& params, double c,
                                        const SolverConfig& cfg = {});

} // namespace plap
