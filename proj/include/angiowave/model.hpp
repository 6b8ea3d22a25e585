#pragma once

// Core parameter set and closed-form quantities of the nondimensional
// wound-healing angiogenesis model. Everything downstream (equilibria,
// dynamics, orbit construction, PDE runs) consumes these types.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace angio {

/// A point (u,w) of the projected phase plane. u is the chemoattractant
/// concentration, w the capillary-tip density. Negative values are allowed
/// for diagnostics; physical orbits satisfy u,w >= 0.
struct PhasePoint {
    double u = 0.0;
    double w = 0.0;
};

/// Dimensional rates of the original model. All strictly positive.
struct DimensionalParams {
    double lambda1, lambda2, lambda3, lambda4;
    double K;
    double chi;
};

/// Nondimensional parameter state. Validated at construction so hot-path
/// evaluations stay branch-free.
class ModelParams {
public:
    ModelParams(double alpha, double beta, double c, double eps = 0.0)
        : alpha_(alpha), beta_(beta), c_(c), eps_(eps) {
        if (!(alpha > 0.0)) throw std::invalid_argument("ModelParams: alpha must be > 0");
        if (!(beta > 1.0)) throw std::invalid_argument("ModelParams: beta must be > 1");
        if (!(c > 0.0)) throw std::invalid_argument("ModelParams: c must be > 0");
        if (!(eps >= 0.0)) throw std::invalid_argument("ModelParams: eps must be >= 0");
    }

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double c() const { return c_; }
    double eps() const { return eps_; }

    ModelParams with_c(double c) const { return ModelParams(alpha_, beta_, c, eps_); }
    ModelParams with_eps(double eps) const { return ModelParams(alpha_, beta_, c_, eps); }

private:
    double alpha_, beta_, c_, eps_;
};

/// f(u,w) = 1 - u - w, the shared kinetic factor.
inline double kinetic_f(double u, double w) { return 1.0 - u - w; }
inline double kinetic_f(const PhasePoint& pt) { return kinetic_f(pt.u, pt.w); }

/// w-kinetics: alpha*w*(beta*u - 1).
inline double kinetic_g(const PhasePoint& pt, const ModelParams& p) {
    return p.alpha() * pt.w * (p.beta() * pt.u - 1.0);
}

/// Wall of singularities / fold curve F(u) = (c^2 + u - u^2) / (2u).
inline double wall_F(double u, const ModelParams& p) {
    if (u == 0.0) throw std::domain_error("wall_F: pole at u = 0");
    return (p.c() * p.c() + u - u * u) / (2.0 * u);
}

/// Complex continuation of F, used when reporting complex fold roots.
inline std::complex<double> wall_F(std::complex<double> u, const ModelParams& p) {
    return (p.c() * p.c() + u - u * u) / (2.0 * u);
}

/// F'(u) = -(u^2 + c^2) / (2u^2); F is strictly decreasing on u > 0.
inline double wall_F_prime(double u, const ModelParams& p) {
    if (u == 0.0) throw std::domain_error("wall_F_prime: pole at u = 0");
    return -(u * u + p.c() * p.c()) / (2.0 * u * u);
}

/// u-coordinate of C0: the positive zero of F, u = (1 + sqrt(1+4c^2))/2.
inline double wall_u_zero(const ModelParams& p) {
    return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * p.c() * p.c()));
}

/// u-coordinate of C0^-, the negative zero of F.
inline double wall_u_zero_neg(const ModelParams& p) {
    return 0.5 * (1.0 - std::sqrt(1.0 + 4.0 * p.c() * p.c()));
}

/// c^2 + u*f(u,2w): vanishes exactly on the fold curve. Positive on the
/// attracting sheet S_a (w < F(u)), negative on the repelling sheet S_r.
inline double fold_factor(const PhasePoint& pt, const ModelParams& p) {
    return p.c() * p.c() + pt.u * kinetic_f(pt.u, 2.0 * pt.w);
}

inline PhasePoint healed_state(const ModelParams& p) {
    return {1.0 / p.beta(), 1.0 - 1.0 / p.beta()};
}
inline PhasePoint wounded_state() { return {1.0, 0.0}; }
inline PhasePoint trivial_state() { return {0.0, 0.0}; }

/// Map dimensional rates to (alpha, beta): alpha = lambda4/lambda1,
/// beta = lambda3*K/lambda4. The wavespeed is not determined by the map
/// and must be supplied by the caller; eps defaults to zero.
inline ModelParams nondimensionalise(const DimensionalParams& d, double c = 1.0) {
    if (!(d.lambda1 > 0.0 && d.lambda2 > 0.0 && d.lambda3 > 0.0 && d.lambda4 > 0.0 &&
          d.K > 0.0 && d.chi > 0.0))
        throw std::invalid_argument("nondimensionalise: all dimensional parameters must be > 0");
    return ModelParams(d.lambda4 / d.lambda1, d.lambda3 * d.K / d.lambda4, c, 0.0);
}

}  // namespace angio
