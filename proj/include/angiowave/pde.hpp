#pragma once

// Method-of-lines simulation of the diffusive system
//   u_t = u f(u,w) + eps u_xx
//   w_t = -(w u_x)_x + alpha w (beta u - 1) + eps w_xx
// used to validate constructed singular orbits as eps > 0 travelling waves.

#include <stdexcept>
#include <vector>

#include "angiowave/model.hpp"
#include "angiowave/orbits.hpp"

namespace angio {

struct Field1D {
    std::vector<double> u, w;
    double x0 = 0.0;
    double dx = 1.0;
    double t = 0.0;

    std::size_t size() const { return u.size(); }
    double x_at(std::size_t i) const { return x0 + dx * static_cast<double>(i); }
};

enum class BoundaryMode { ClampedToStates, ZeroFlux };
enum class FrameMode { Lab, Comoving };

struct PdeConfig {
    double L = 40.0;
    int N = 4096;
    double eps = 1e-3;
    BoundaryMode boundary = BoundaryMode::ClampedToStates;
    FrameMode frame = FrameMode::Lab;
    bool upwind = false;           // required when eps = 0
    bool kinetics_enabled = true;  // test hook for conservation checks
    double cfl_safety = 0.4;
    double max_dt = 1e-2;
    double snapshot_dt = 0.5;
    double transient_cutoff = 2.0;
};

class SimulationBlowup : public std::runtime_error {
public:
    SimulationBlowup(const std::string& what, Field1D state)
        : std::runtime_error(what), state(std::move(state)) {}
    Field1D state;
};

void validate(const PdeConfig& cfg);

/// Semi-discrete right-hand side. Chemotaxis in conservative form with face
/// fluxes w*u_x (central face average of w when eps > 0, upwinded on the
/// sign of the face u_x when cfg.upwind); eps times second differences;
/// comoving frame adds c times first-derivative transport.
void semidiscrete_rhs(const Field1D& f, const ModelParams& p, const PdeConfig& cfg,
                      std::vector<double>& dudt, std::vector<double>& dwdt);

/// Classic RK4 in time with dt from the advective CFL and diffusive
/// dx^2/(2 eps) constraints. Throws SimulationBlowup on non-finite values.
Field1D step_to(Field1D f, double t_end, const ModelParams& p, const PdeConfig& cfg);

/// Sample a singular orbit onto the grid, front centred at x = L/2, far
/// fields padded with the limit states. Across a jump the inner profile from
/// integrate_layer_fibre is inserted at width O(eps).
Field1D seed_from_orbit(const SingularOrbit& orbit, const ModelParams& p, const PdeConfig& cfg);

struct SpeedFit {
    double speed = 0.0;
    double residual = 0.0;  // rms of the linear fit
    std::vector<double> times, fronts;
};

/// Front location where u crosses (1 + 1/beta)/2, linearly interpolated;
/// throws when the level is not crossed.
double front_location(const Field1D& f, const ModelParams& p);

/// Least-squares slope of front location against time over the snapshots.
/// In the comoving frame the frame speed c is added back, so the value is
/// always the lab-frame wavespeed.
SpeedFit measure_wavespeed(const std::vector<Field1D>& history, const ModelParams& p,
                           const PdeConfig& cfg);

/// Equivalent width of the w-transition: the drop across the window where
/// |w_x| exceeds a quarter of its peak, divided by the peak gradient. For a
/// tanh profile of scale delta this evaluates to about 1.63 delta.
double shock_width(const Field1D& f, const ModelParams& p);

}  // namespace angio
