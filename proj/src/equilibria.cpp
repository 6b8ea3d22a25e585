#include "angiowave/equilibria.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace angio {

std::string to_string(EquilibriumKind k) {
    switch (k) {
        case EquilibriumKind::Trivial: return "T";
        case EquilibriumKind::Wounded: return "W";
        case EquilibriumKind::Healed: return "H";
        case EquilibriumKind::CZeroPlus: return "C0";
        case EquilibriumKind::CZeroMinus: return "C0-";
        case EquilibriumKind::FoldRoot: return "C";
    }
    return "?";
}

std::string to_string(LinearType t) {
    switch (t) {
        case LinearType::Saddle: return "saddle";
        case LinearType::StableNode: return "stable-node";
        case LinearType::UnstableNode: return "unstable-node";
        case LinearType::StableFocus: return "stable-focus";
        case LinearType::UnstableFocus: return "unstable-focus";
        case LinearType::Degenerate: return "degenerate";
    }
    return "?";
}

std::string to_string(FoldedType t) {
    switch (t) {
        case FoldedType::None: return "none";
        case FoldedType::FoldedSaddle: return "folded-saddle";
        case FoldedType::FoldedNodeIn: return "folded-node-in";
        case FoldedType::FoldedNodeOut: return "folded-node-out";
        case FoldedType::FoldedFocus: return "folded-focus";
        case FoldedType::FoldedDegenerate: return "folded-degenerate";
    }
    return "?";
}

std::string to_string(Side s) {
    switch (s) {
        case Side::Attracting: return "S_a";
        case Side::Repelling: return "S_r";
        case Side::OnFold: return "on-F";
    }
    return "?";
}

std::array<double, 5> hole_polynomial_coeffs(const ModelParams& p) {
    const double c2 = p.c() * p.c();
    return {3.0,
            -4.0,
            1.0 + 4.0 * c2 * (1.0 - p.alpha() * p.beta()),
            2.0 * c2 * (2.0 * p.alpha() - 1.0),
            c2 * c2};
}

namespace {

std::complex<double> poly_eval(const std::array<double, 5>& a, std::complex<double> u) {
    std::complex<double> v = a[0];
    for (int i = 1; i < 5; ++i) v = v * u + a[i];
    return v;
}

std::complex<double> poly_deriv(const std::array<double, 5>& a, std::complex<double> u) {
    std::complex<double> v = 4.0 * a[0];
    for (int i = 1; i < 4; ++i) v = v * u + (4.0 - i) * a[i];
    return v;
}

}  // namespace

std::vector<std::complex<double>> hole_roots(const ModelParams& p) {
    const auto a = hole_polynomial_coeffs(p);
    // Companion matrix of the monic quartic; QR iteration via Eigen.
    Eigen::Matrix4d C = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) C(0, i) = -a[i + 1] / a[0];
    C(1, 0) = C(2, 1) = C(3, 2) = 1.0;
    Eigen::EigenSolver<Eigen::Matrix4d> es(C, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hole_roots: companion eigenvalue iteration failed to converge");

    std::vector<std::complex<double>> roots(4);
    for (int i = 0; i < 4; ++i) {
        std::complex<double> r = es.eigenvalues()[i];
        // Newton polish; companion eigenvalues are already close.
        for (int it = 0; it < 3; ++it) {
            const auto d = poly_deriv(a, r);
            if (std::abs(d) < 1e-300) break;
            r -= poly_eval(a, r) / d;
        }
        roots[i] = r;
    }
    std::sort(roots.begin(), roots.end(), [](const auto& x, const auto& y) {
        if (x.real() != y.real()) return x.real() > y.real();
        return x.imag() > y.imag();
    });
    return roots;
}

int descartes_bound(const ModelParams& p) {
    const double c2 = p.c() * p.c();
    if (p.alpha() > 0.5) return 2;
    if (p.beta() > (1.0 / p.alpha()) * (1.0 + 1.0 / (4.0 * c2))) return 2;
    return 4;
}

std::array<std::array<double, 2>, 2> jacobian_ds(const PhasePoint& pt, const ModelParams& p) {
    const double u = pt.u, w = pt.w, c = p.c();
    const double fuw = kinetic_f(u, w);
    const double fu2w = kinetic_f(u, 2.0 * w);
    const double f2uw = kinetic_f(2.0 * u, w);
    const double f2u2w = kinetic_f(2.0 * u, 2.0 * w);
    const double phi = c * c + u * fu2w;
    std::array<std::array<double, 2>, 2> J;
    J[0][0] = -(phi * f2uw) / c - (u * fuw * f2u2w) / c;
    J[0][1] = (u * phi) / c + (2.0 * u * u * fuw) / c;
    J[1][0] = (w * f2uw * f2uw) / c - (2.0 * u * w * fuw) / c - p.alpha() * p.beta() * c * w;
    J[1][1] = (u * f2uw * fu2w) / c - (u * w * fuw) / c - p.alpha() * c * (p.beta() * u - 1.0);
    return J;
}

double curve_c1(double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("curve_c1: beta must be > 1");
    return std::sqrt(beta - 1.0) / beta;
}

std::optional<double> curve_c2(double alpha, double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("curve_c2: beta must be > 1");
    const double rad = 4.0 * alpha * beta * (beta - 1.0) - 1.0;
    if (rad <= 0.0) return std::nullopt;
    return 2.0 * std::sqrt(alpha) * (beta - 1.0) / std::sqrt(beta * rad);
}

std::optional<double> curve_c3(double alpha, double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("curve_c3: beta must be > 1");
    const double lo = std::min(2.0 / beta, 1.0 / (beta - 1.0));
    const double hi = std::max(2.0 / beta, 1.0 / (beta - 1.0));
    if (alpha <= lo || alpha >= hi) {
        // Endpoints where the radicand vanishes are admitted below.
        if (!(alpha == hi && beta <= 2.0) && !(alpha == lo && beta > 2.0)) return std::nullopt;
    }
    const double rad = (1.0 - alpha) * (alpha * (beta - 1.0) - 1.0);
    if (rad < 0.0) return std::nullopt;
    const double den = (beta <= 2.0) ? (alpha * beta - 2.0) : (2.0 - alpha * beta);
    if (den == 0.0) return std::nullopt;
    return std::sqrt(rad) / den;
}

void classify_linear(const std::array<std::array<double, 2>, 2>& J,
                     const ClassifyTolerances& tol,
                     LinearType& type,
                     std::array<std::complex<double>, 2>& eigenvalues,
                     std::array<std::array<std::complex<double>, 2>, 2>& eigenvectors) {
    const double tr = J[0][0] + J[1][1];
    const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
    const double disc = tr * tr - 4.0 * det;

    const std::complex<double> sq = std::sqrt(std::complex<double>(disc, 0.0));
    eigenvalues[0] = 0.5 * (tr + sq);
    eigenvalues[1] = 0.5 * (tr - sq);

    for (int i = 0; i < 2; ++i) {
        const auto lam = eigenvalues[i];
        std::complex<double> v0 = J[0][1], v1 = lam - J[0][0];
        if (std::abs(v0) + std::abs(v1) < 1e-14) {
            v0 = lam - J[1][1];
            v1 = J[1][0];
        }
        const double n = std::hypot(std::abs(v0), std::abs(v1));
        if (n > 0.0) {
            v0 /= n;
            v1 /= n;
        } else {
            v0 = 1.0;
            v1 = 0.0;
        }
        eigenvectors[i] = {v0, v1};
    }

    if (std::abs(disc) <= tol.disc_tol || det == 0.0) {
        type = LinearType::Degenerate;
    } else if (det < 0.0) {
        type = LinearType::Saddle;
    } else if (disc > 0.0) {
        type = tr > 0.0 ? LinearType::UnstableNode : LinearType::StableNode;
    } else {
        type = tr > 0.0 ? LinearType::UnstableFocus : LinearType::StableFocus;
    }
}

namespace {

FoldedType folded_from_linear(LinearType t) {
    switch (t) {
        case LinearType::Saddle: return FoldedType::FoldedSaddle;
        case LinearType::StableNode: return FoldedType::FoldedNodeIn;
        case LinearType::UnstableNode: return FoldedType::FoldedNodeOut;
        case LinearType::StableFocus:
        case LinearType::UnstableFocus: return FoldedType::FoldedFocus;
        case LinearType::Degenerate: return FoldedType::FoldedDegenerate;
    }
    return FoldedType::FoldedDegenerate;
}

EquilibriumRecord make_record(EquilibriumKind kind, int fold_index, PhasePoint loc,
                              const ModelParams& p, const ClassifyTolerances& tol) {
    EquilibriumRecord rec;
    rec.kind = kind;
    rec.fold_index = fold_index;
    rec.location = loc;
    classify_linear(jacobian_ds(loc, p), tol, rec.cls.linear_type, rec.eigenvalues,
                    rec.eigenvectors);

    bool on_fold = false;
    if (loc.u != 0.0) {
        on_fold = std::abs(loc.w - wall_F(loc.u, p)) <= tol.fold_tol;
    }
    if (on_fold) {
        rec.cls.side = Side::OnFold;
        rec.cls.folded_type = folded_from_linear(rec.cls.linear_type);
    } else {
        const double phi = fold_factor(loc, p);
        rec.cls.side = std::abs(phi) <= tol.fold_tol
                           ? Side::OnFold
                           : (phi > 0.0 ? Side::Attracting : Side::Repelling);
        if (rec.cls.side == Side::OnFold) rec.cls.folded_type = folded_from_linear(rec.cls.linear_type);
    }
    return rec;
}

}  // namespace

RegionReport census(const ModelParams& p, const ClassifyTolerances& tol) {
    RegionReport report{p, {}, hole_roots(p)};
    report.records.push_back(make_record(EquilibriumKind::Trivial, 0, trivial_state(), p, tol));
    report.records.push_back(make_record(EquilibriumKind::Wounded, 0, wounded_state(), p, tol));
    report.records.push_back(make_record(EquilibriumKind::Healed, 0, healed_state(p), p, tol));
    report.records.push_back(
        make_record(EquilibriumKind::CZeroPlus, 0, {wall_u_zero(p), 0.0}, p, tol));
    report.records.push_back(
        make_record(EquilibriumKind::CZeroMinus, 0, {wall_u_zero_neg(p), 0.0}, p, tol));

    const double u_c0 = wall_u_zero(p);
    int k = 0;
    for (const auto& r : report.quartic_roots) {
        ++k;
        if (std::abs(r.imag()) > tol.imag_tol) continue;
        const double u = r.real();
        if (u <= tol.pos_tol || u >= u_c0 - tol.pos_tol) continue;
        report.records.push_back(
            make_record(EquilibriumKind::FoldRoot, k, {u, wall_F(u, p)}, p, tol));
    }
    return report;
}

const EquilibriumRecord* find_record(const RegionReport& r, EquilibriumKind kind) {
    for (const auto& rec : r.records)
        if (rec.kind == kind) return &rec;
    return nullptr;
}

std::vector<const EquilibriumRecord*> folded_singularities(const RegionReport& r) {
    std::vector<const EquilibriumRecord*> out;
    for (const auto& rec : r.records)
        if (rec.kind == EquilibriumKind::FoldRoot && rec.location.w > 0.0) out.push_back(&rec);
    return out;
}

}  // namespace angio
