#include "angiowave/dynamics.hpp"

#include <cmath>

namespace angio {

std::array<double, 2> ds_field(const PhasePoint& pt, const ModelParams& p) {
    const double u = pt.u, w = pt.w, c = p.c();
    const double fuw = kinetic_f(u, w);
    const double phi = fold_factor(pt, p);
    return {-u * fuw * phi / c,
            u * w * fuw * kinetic_f(2.0 * u, w) / c - p.alpha() * c * w * (p.beta() * u - 1.0)};
}

ReducedField reduced_field(const PhasePoint& pt, const ModelParams& p, double fold_threshold) {
    const double phi = fold_factor(pt, p);
    if (std::abs(phi) <= fold_threshold)
        throw FoldProximityError("reduced_field: point within fold threshold of F");
    const double u = pt.u, w = pt.w, c = p.c();
    // Solve M (u_z, w_z)^T = RHS with M = [[c, 0], [w f(2u,w)/c, phi/c]].
    const double uz = -u * kinetic_f(u, w) / c;
    const double wz =
        (-p.alpha() * w * (p.beta() * u - 1.0) - (w / c) * kinetic_f(2.0 * u, w) * uz) * c / phi;
    ReducedField out;
    out.deriv = {uz, wz};
    out.side = phi > 0.0 ? Side::Attracting : Side::Repelling;
    return out;
}

std::array<double, 3> layer_field(const SlowPoint& s, const ModelParams& p) {
    const double c = p.c();
    return {s.u_hat - c * s.u,
            -c * s.v - s.u * kinetic_f(s.u, s.w),
            s.w_hat - c * s.w + s.v * s.w};
}

SlowPoint embed_on_S(const PhasePoint& pt, const ModelParams& p) {
    SlowPoint s;
    s.u = pt.u;
    s.w = pt.w;
    s.v = -pt.u * kinetic_f(pt.u, pt.w) / p.c();
    s.u_hat = p.c() * pt.u;
    s.w_hat = p.c() * pt.w - s.v * pt.w;
    return s;
}

std::array<double, 3> layer_eigenvalues(const SlowPoint& s, const ModelParams& p) {
    const double c = p.c();
    const double rad = std::sqrt(s.v * s.v + 4.0 * s.u * s.w);
    return {-c, -c + 0.5 * (s.v - rad), -c + 0.5 * (s.v + rad)};
}

std::array<std::array<double, 3>, 3> layer_jacobian(const SlowPoint& s, const ModelParams& p) {
    const double c = p.c();
    return {{{-c, 0.0, 0.0},
             {-kinetic_f(2.0 * s.u, s.w), -c, s.u},
             {0.0, s.w, -c + s.v}}};
}

SlowPoint fold_point(double u, const ModelParams& p) {
    return embed_on_S({u, wall_F(u, p)}, p);
}

namespace {

double fold_P(double u, const ModelParams& p) {
    const double c = p.c();
    const double Q = std::sqrt(c * c + u * u);
    return (3.0 * c * c + u - u * u) / (2.0 * Q);
}

double fold_Q(double u, const ModelParams& p) {
    return std::sqrt(p.c() * p.c() + u * u);
}

}  // namespace

std::array<double, 3> fold_null_left(double u, const ModelParams& p) {
    const double c = p.c();
    const double F = wall_F(u, p);
    const double P = fold_P(u, p);
    return {F * (c * c - u + 3.0 * u * u) / (2.0 * c * u) / P, F / P, c / P};
}

std::array<double, 3> fold_null_right(double u, const ModelParams& p) {
    const double Q = fold_Q(u, p);
    return {0.0, u / Q, p.c() / Q};
}

double fold_nondegeneracy_direct(double u, const ModelParams& p, double step) {
    const SlowPoint s0 = fold_point(u, p);
    const auto pv = fold_null_left(u, p);
    const auto qv = fold_null_right(u, p);
    const double h = step * std::max(1.0, std::max(std::abs(s0.u), std::abs(s0.w)));
    // Directional second derivative of the layer field along q.
    SlowPoint sp = s0, sm = s0;
    sp.u += h * qv[0]; sp.v += h * qv[1]; sp.w += h * qv[2];
    sm.u -= h * qv[0]; sm.v -= h * qv[1]; sm.w -= h * qv[2];
    const auto Gp = layer_field(sp, p);
    const auto G0 = layer_field(s0, p);
    const auto Gm = layer_field(sm, p);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        acc += pv[i] * (Gp[i] - 2.0 * G0[i] + Gm[i]) / (h * h);
    return acc;
}

double fold_nondegeneracy(double u, const ModelParams& p) {
    if (!(u > 0.0 && u < wall_u_zero(p)))
        throw std::domain_error("fold_nondegeneracy: u outside the physical fold (0, u_C0)");
    const double c = p.c();
    const double P = fold_P(u, p);
    const double Q = fold_Q(u, p);
    const double value = 2.0 * c * c * u / (P * Q * Q);
    if (std::abs(value) < 1e-10)
        throw std::runtime_error("fold_nondegeneracy: degenerate fold point");
    const double direct = fold_nondegeneracy_direct(u, p);
    if (std::abs(value - direct) > 1e-8 * std::max(1.0, std::abs(value)))
        throw std::logic_error("fold_nondegeneracy: closed form disagrees with bilinear form");
    return value;
}

std::array<double, 2> fold_transversality(double u, const ModelParams& p) {
    if (!(u > 0.0 && u <= wall_u_zero(p)))
        throw std::domain_error("fold_transversality: u outside the physical fold");
    const double c = p.c();
    const double P = fold_P(u, p);
    const double F = wall_F(u, p);
    const std::array<double, 2> t = {F * (c * c - u + 3.0 * u * u) / (2.0 * c * u) / P, c / P};
    if (std::hypot(t[0], t[1]) < 1e-10)
        throw std::runtime_error("fold_transversality: vector degenerates");
    return t;
}

std::array<double, 2> fold_transversality_direct(double u, const ModelParams& p, double step) {
    const SlowPoint s0 = fold_point(u, p);
    const auto pv = fold_null_left(u, p);
    std::array<double, 2> out{};
    for (int k = 0; k < 2; ++k) {
        SlowPoint sp = s0, sm = s0;
        if (k == 0) {
            sp.u_hat += step;
            sm.u_hat -= step;
        } else {
            sp.w_hat += step;
            sm.w_hat -= step;
        }
        const auto Gp = layer_field(sp, p);
        const auto Gm = layer_field(sm, p);
        for (int i = 0; i < 3; ++i) out[k] += pv[i] * (Gp[i] - Gm[i]) / (2.0 * step);
    }
    return out;
}

FoldDiagnostics fold_diagnostics(double u, const ModelParams& p) {
    FoldDiagnostics d;
    d.eigenvalues = layer_eigenvalues(fold_point(u, p), p);
    d.nondegeneracy = fold_nondegeneracy(u, p);
    d.transversality = fold_transversality(u, p);
    return d;
}

}  // namespace angio
