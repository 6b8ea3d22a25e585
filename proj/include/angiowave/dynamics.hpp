#pragma once

// The three singular-limit vector fields (desingularised, reduced, layer),
// the critical-manifold embedding and the fold diagnostics used to check
// the non-degeneracy and transversality hypotheses numerically.

#include <array>
#include <stdexcept>

#include "angiowave/equilibria.hpp"
#include "angiowave/model.hpp"

namespace angio {

/// A point of the 5-D slow system; v_hat is identically zero and eliminated.
struct SlowPoint {
    double u = 0.0, v = 0.0, w = 0.0;
    double u_hat = 0.0, w_hat = 0.0;
};

struct FoldDiagnostics {
    std::array<double, 3> eigenvalues{};  // lambda1 = -c exactly
    double nondegeneracy = 0.0;
    std::array<double, 2> transversality{};
};

/// Thrown by reduced_field when |c^2 + u f(u,2w)| falls below threshold;
/// fold crossings must be routed through canard logic, not raw division.
class FoldProximityError : public std::runtime_error {
public:
    explicit FoldProximityError(const std::string& what) : std::runtime_error(what) {}
};

/// Desingularised field, in the rescaled coordinate z-bar.
std::array<double, 2> ds_field(const PhasePoint& pt, const ModelParams& p);

struct ReducedField {
    std::array<double, 2> deriv{};  // (du/dz, dw/dz)
    Side side = Side::Attracting;
};

/// Reduced (slow) flow in z, obtained by solving the mass-matrix system
/// M (u_z, w_z)^T = RHS directly. Equals ds_field divided by the fold
/// factor; fails within fold_threshold of F.
ReducedField reduced_field(const PhasePoint& pt, const ModelParams& p,
                           double fold_threshold = 1e-12);

/// Layer (fast) field in y, with u_hat, w_hat frozen. Returns (u_y, v_y, w_y).
std::array<double, 3> layer_field(const SlowPoint& s, const ModelParams& p);

/// Embed a phase point onto the critical manifold S.
SlowPoint embed_on_S(const PhasePoint& pt, const ModelParams& p);

/// Closed-form eigenvalues of the layer linearisation restricted to S:
/// lambda1 = -c, lambda2,3 = -c + (v -/+ sqrt(v^2+4uw))/2.
std::array<double, 3> layer_eigenvalues(const SlowPoint& s, const ModelParams& p);

/// 3x3 Jacobian of the layer problem at a slow point, row-major.
std::array<std::array<double, 3>, 3> layer_jacobian(const SlowPoint& s, const ModelParams& p);

/// Adjoint null-vector p and null-vector q of the layer Jacobian at the fold
/// point over u, normalised via q.q = p.q = 1. Signs fixed so the closed-form
/// identity p.B(q,q) = 2c^2 u/(P Q^2) holds with P, Q > 0.
std::array<double, 3> fold_null_left(double u, const ModelParams& p);
std::array<double, 3> fold_null_right(double u, const ModelParams& p);

/// Fold non-degeneracy value 2c^2 u / (P Q^2); cross-checked internally
/// against the finite-difference bilinear form p.B(q,q). Throws on
/// degeneracy or on disagreement between the two routes.
double fold_nondegeneracy(double u, const ModelParams& p);

/// Direct evaluation of p.B(q,q) by central differences of the layer field.
double fold_nondegeneracy_direct(double u, const ModelParams& p, double step = 1e-3);

/// Fold transversality vector (1/P)(F(u)(c^2-u+3u^2)/(2cu), c); throws when
/// its norm degenerates.
std::array<double, 2> fold_transversality(double u, const ModelParams& p);

/// Same projection computed from finite differences of the layer field with
/// respect to (u_hat, w_hat).
std::array<double, 2> fold_transversality_direct(double u, const ModelParams& p,
                                                 double step = 1e-5);

/// All fold diagnostics at the fold point over u in (0, u_C0).
FoldDiagnostics fold_diagnostics(double u, const ModelParams& p);

/// The slow point on the fold curve over u.
SlowPoint fold_point(double u, const ModelParams& p);

}  // namespace angio
