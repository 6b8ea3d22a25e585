#pragma once

// Equilibria of the desingularised system and folded singularities of the
// reduced flow: the canard quartic, Jacobian, linear classification, the
// bifurcation curves c1/c2/c3 and the full per-parameter census.

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "angiowave/model.hpp"

namespace angio {

enum class EquilibriumKind { Trivial, Wounded, Healed, CZeroPlus, CZeroMinus, FoldRoot };

enum class LinearType { Saddle, StableNode, UnstableNode, StableFocus, UnstableFocus, Degenerate };

/// Folded-singularity type of the reduced flow at points on F. The node
/// variants encode multiplicity of the S_r -> S_a passage: In admits a wedge
/// of trajectories (the underlying node is stable), Out a single direction
/// (the underlying node is unstable).
enum class FoldedType { None, FoldedSaddle, FoldedNodeIn, FoldedNodeOut, FoldedFocus, FoldedDegenerate };

enum class Side { Attracting, Repelling, OnFold };

std::string to_string(EquilibriumKind k);
std::string to_string(LinearType t);
std::string to_string(FoldedType t);
std::string to_string(Side s);

struct Classification {
    LinearType linear_type = LinearType::Degenerate;
    FoldedType folded_type = FoldedType::None;  // set only for points on F
    Side side = Side::Attracting;
};

struct EquilibriumRecord {
    EquilibriumKind kind = EquilibriumKind::Trivial;
    int fold_index = 0;  // k for C_k roots, 0 otherwise
    PhasePoint location;
    Classification cls;
    std::array<std::complex<double>, 2> eigenvalues{};
    // One eigenvector per eigenvalue; complex pairs share real/imag parts.
    std::array<std::array<std::complex<double>, 2>, 2> eigenvectors{};
};

/// Numerical thresholds for root realness, positivity and type decisions.
struct ClassifyTolerances {
    double imag_tol = 1e-9;   // |imag| below which a quartic root counts as real
    double pos_tol = 1e-9;    // u > pos_tol counts as positive
    double fold_tol = 1e-9;   // |w - F(u)| below which a point lies on F
    double disc_tol = 1e-10;  // |discriminant| below which node/focus is degenerate
};

struct RegionReport {
    ModelParams params;
    std::vector<EquilibriumRecord> records;             // T, W, H, C0, C0^-, physical C_k
    std::vector<std::complex<double>> quartic_roots;    // all four, sorted
};

/// Coefficients (descending powers) of the canard quartic
/// 3u^4 - 4u^3 + [1+4c^2(1-ab)]u^2 + 2c^2(2a-1)u + c^4.
std::array<double, 5> hole_polynomial_coeffs(const ModelParams& p);

/// All four roots of the canard quartic, via the eigenvalues of the 4x4
/// companion matrix, Newton-polished. Sorted by descending real part, then
/// descending imaginary part.
std::vector<std::complex<double>> hole_roots(const ModelParams& p);

/// Descartes bound on the number of positive quartic roots: 2 or 4.
int descartes_bound(const ModelParams& p);

/// Jacobian of the desingularised field at (u,w), row-major.
std::array<std::array<double, 2>, 2> jacobian_ds(const PhasePoint& pt, const ModelParams& p);

/// FSN II curve: H crosses the fold at c = c1(beta) = sqrt(beta-1)/beta.
double curve_c1(double beta);

/// Node/focus boundary for H; undefined when 4*alpha*beta*(beta-1) <= 1.
std::optional<double> curve_c2(double alpha, double beta);

/// FSN I curve through C0, defined piecewise on its stated alpha interval.
std::optional<double> curve_c3(double alpha, double beta);

/// Linear classification from a 2x2 Jacobian (eigenvalues, eigenvectors,
/// saddle/node/focus decision).
void classify_linear(const std::array<std::array<double, 2>, 2>& J,
                     const ClassifyTolerances& tol,
                     LinearType& type,
                     std::array<std::complex<double>, 2>& eigenvalues,
                     std::array<std::array<std::complex<double>, 2>, 2>& eigenvectors);

/// Full census for one parameter triple: locations, classification and
/// eigen-data for T, W, H, C0, C0^- and every real fold root in (0, u_C0).
RegionReport census(const ModelParams& p, const ClassifyTolerances& tol = {});

/// Look up a record by kind (first match); nullptr when absent.
const EquilibriumRecord* find_record(const RegionReport& r, EquilibriumKind kind);

/// Physical folded singularities: records on F with 0 < u < u_C0, w > 0.
std::vector<const EquilibriumRecord*> folded_singularities(const RegionReport& r);

}  // namespace angio
