#pragma once

// Invariant-manifold tracing for the desingularised system and assembly of
// singular heteroclinic orbits: smooth waves, shock-fronted waves through a
// folded saddle, and S_r-launched jump waves.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "angiowave/dynamics.hpp"
#include "angiowave/equilibria.hpp"
#include "angiowave/model.hpp"

namespace angio {

enum class TerminalEvent { ReachedTarget, HitFold, LeftWindow, MaxLength, SpiralConverged, MinStep };

std::string to_string(TerminalEvent t);

struct TraceSample {
    double zbar = 0.0;
    PhasePoint pt;
};

struct ManifoldTrace {
    std::vector<TraceSample> samples;  // in integration order
    TerminalEvent terminal = TerminalEvent::MaxLength;
    PhasePoint origin;
    int direction = +1;  // +1 forward z-bar, -1 backward
};

struct Window {
    double u_min = -0.5, u_max = 3.0;
    double w_min = -0.5, w_max = 3.0;
    bool contains(const PhasePoint& pt) const {
        return pt.u >= u_min && pt.u <= u_max && pt.w >= w_min && pt.w <= w_max;
    }
};

struct IntegratorConfig {
    double abs_tol = 1e-10;
    double rel_tol = 1e-8;
    double max_step = 0.05;
    double min_step = 1e-13;
    double delta = 1e-6;          // eigenvector launch offset from equilibria
    double spiral_radius = 1e-4;  // convergence radius at foci
    double max_arc_length = 400.0;
    std::size_t max_steps = 4000000;
    Window window;
};

struct StopEvents {
    bool stop_on_fold = false;
    std::optional<PhasePoint> spiral_target;
    std::optional<PhasePoint> reach_target;
    double reach_radius = 1e-8;
    // Fold crossings inside this radius of fold_ignore_near are not events;
    // launches adjacent to a canard point sit on the fold to within delta.
    std::optional<PhasePoint> fold_ignore_near;
    double fold_ignore_radius = 1e-3;
};

enum class Direction { Forward, Backward };
enum class ManifoldBranch { Stable, Unstable };

/// Adaptive RK4(5) trace of the desingularised flow with dense event
/// detection for fold crossings, window exit and focus convergence.
ManifoldTrace integrate_ds(const PhasePoint& start, Direction dir, const ModelParams& p,
                           const IntegratorConfig& cfg, const StopEvents& ev);

/// Launch from eq.location + sign*delta*eigenvector and integrate away from
/// the saddle (backward z-bar for the stable branch, forward for unstable).
ManifoldTrace trace_saddle_manifold(const EquilibriumRecord& eq, ManifoldBranch which, int sign,
                                    const ModelParams& p, const IntegratorConfig& cfg,
                                    const StopEvents& ev);

/// Pick the launch sign so the first step lies on the requested sheet (or,
/// for on-sheet saddles, in the requested w half-plane).
int branch_sign_for_side(const EquilibriumRecord& eq, ManifoldBranch which, Side side,
                         const ModelParams& p, const IntegratorConfig& cfg);

/// Rescale z-bar to the travelling-wave coordinate z by quadrature of
/// dz = (c^2 + u f(u,2w)) dz-bar; output sorted ascending in z.
std::vector<std::pair<double, PhasePoint>> reparameterise_to_z(const ManifoldTrace& trace,
                                                               const ModelParams& p);

/// Monotone-in-u resampling of a trace tail, used for jump matching.
struct ArcCurve {
    std::vector<double> u, w;
    bool increasing = true;
    double u_min() const;
    double u_max() const;
    double w_at(double uq) const;  // piecewise linear
};

ArcCurve monotone_arc(const ManifoldTrace& trace);

struct JumpRecord {
    double u_star = 0.0;
    double w_depart = 0.0;
    double w_land = 0.0;
    // Residual of the equidistance matching w_r(u*) + w_a(u*) - 2F(u*).
    // Zero (to bisection tolerance) at an interior root; nonzero when the
    // root falls marginally outside the landing arc and the nearest endpoint
    // was accepted instead (truncated published wavespeeds land here).
    double mismatch = 0.0;
};

enum class WaveKind { Smooth, Shock };

struct OrbitSample {
    double z = 0.0;
    double u = 0.0, w = 0.0, v = 0.0;
    Side side = Side::Attracting;
    int arc_id = 0;
};

struct SingularOrbit {
    WaveKind kind = WaveKind::Smooth;
    std::vector<OrbitSample> samples;  // ascending z; a shock appears as two
                                       // consecutive rows with equal z and u
    std::optional<JumpRecord> jump;
    double transversality = 0.0;       // 0 when degenerate or smooth
    bool transversality_degenerate = false;
    PhasePoint start_state, end_state;
    // fold-crossing diagnostics (u-locations; 0 when not applicable)
    double canard_fold_u = 0.0;
    double landing_fold_u = 0.0;
};

enum class WaveFailure {
    None,
    PreconditionViolation,
    NoConnection,
    NoCanardConnection,
    NoJump,
    TransversalityFailure,
    FoldTouch
};

std::string to_string(WaveFailure f);

/// Manifold data behind a jump construction, exposed so independent
/// dense-sampling oracles can re-solve the matching problem.
struct ShockDetail {
    ArcCurve depart_arc;   // w_r(u), repelling-sheet side
    ArcCurve landing_arc;  // w_a(u), attracting-sheet side
};

struct WaveResult {
    std::optional<SingularOrbit> orbit;
    WaveFailure failure = WaveFailure::None;
    std::string message;
    std::optional<ShockDetail> detail;
};

/// Smooth heteroclinic H -> W on the attracting sheet (backward trace from
/// W must spiral-converge to H).
WaveResult construct_smooth_wave(const ModelParams& p, const IntegratorConfig& cfg = {});

/// Shock-fronted orbit through a folded saddle: slow spiral H -> folded
/// saddle, canard continuation onto S_r, layer jump, landing arc to W.
WaveResult construct_shock_wave(const ModelParams& p, const IntegratorConfig& cfg = {});

/// Jump orbit launched from H when H lies on the repelling sheet.
WaveResult construct_sr_jump_wave(const ModelParams& p, const IntegratorConfig& cfg = {});

/// Symbolic transversality value alpha c^2 (beta u - 1)(u - 1) /
/// (u f(u,w*) (c^2 - u w*)). Throws near the degeneracies u = 1/beta, u = 1.
double transversality_check(double u_star, double w_star, const ModelParams& p);

/// Geometric counterpart 2F'(u) - dw/du|_{w*} - dw/du|_{2F-w*} from the
/// reduced field.
double transversality_check_geometric(double u_star, double w_star, const ModelParams& p);

struct FibreSample {
    double y = 0.0;
    SlowPoint s;
};

/// Integrate the layer problem off the repelling sheet at (u*, w_depart);
/// converges to the equidistant landing point on S_a and provides the inner
/// shock profile. Throws on divergence (inadmissible jump).
std::vector<FibreSample> integrate_layer_fibre(double u_star, double w_depart,
                                               const ModelParams& p, double perturb = 1e-7);

struct CycleScanReport {
    int seeds = 0;
    int converged_to_equilibrium = 0;
    int left_window = 0;
    int undecided = 0;
    int suspected_cycles = 0;  // near-coincident Poincare returns away from equilibria
};

/// Forward-integration scan supporting the no-limit-cycle assumption;
/// reported, never asserted as proof.
CycleScanReport scan_limit_cycles(const ModelParams& p, int n_seeds = 200,
                                  const IntegratorConfig& cfg = {});

/// Bisection in c for the wavespeed at which the smooth connection is lost
/// (smooth construction succeeds at c_hi, fails at c_lo).
std::optional<double> find_smooth_loss_c(double alpha, double beta, double c_lo, double c_hi,
                                         double tol = 1e-3, const IntegratorConfig& cfg = {});

}  // namespace angio
