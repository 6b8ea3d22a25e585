#include "angiowave/pde.hpp"

#include <algorithm>
#include <cmath>

namespace angio {

void validate(const PdeConfig& cfg) {
    if (cfg.N < 64) throw std::invalid_argument("PdeConfig: N must be >= 64");
    if (!(cfg.L > 0.0)) throw std::invalid_argument("PdeConfig: L must be > 0");
    if (!(cfg.eps >= 0.0)) throw std::invalid_argument("PdeConfig: eps must be >= 0");
    if (cfg.eps == 0.0 && !cfg.upwind)
        throw std::invalid_argument("PdeConfig: eps = 0 requires upwinded advection");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        throw std::invalid_argument("PdeConfig: cfl_safety must lie in (0, 1]");
}

void semidiscrete_rhs(const Field1D& f, const ModelParams& p, const PdeConfig& cfg,
                      std::vector<double>& dudt, std::vector<double>& dwdt) {
    const std::size_t n = f.size();
    dudt.assign(n, 0.0);
    dwdt.assign(n, 0.0);
    const double dx = f.dx;
    const double inv_dx = 1.0 / dx;
    const double inv_dx2 = inv_dx * inv_dx;

    // Ghost values implementing the boundary mode.
    auto u_at = [&](long i) -> double {
        if (i < 0) return cfg.boundary == BoundaryMode::ZeroFlux ? f.u[static_cast<std::size_t>(-i)] : f.u[0];
        if (i >= static_cast<long>(n))
            return cfg.boundary == BoundaryMode::ZeroFlux
                       ? f.u[n - 2 - static_cast<std::size_t>(i - static_cast<long>(n))]
                       : f.u[n - 1];
        return f.u[static_cast<std::size_t>(i)];
    };
    auto w_at = [&](long i) -> double {
        if (i < 0) return cfg.boundary == BoundaryMode::ZeroFlux ? f.w[static_cast<std::size_t>(-i)] : f.w[0];
        if (i >= static_cast<long>(n))
            return cfg.boundary == BoundaryMode::ZeroFlux
                       ? f.w[n - 2 - static_cast<std::size_t>(i - static_cast<long>(n))]
                       : f.w[n - 1];
        return f.w[static_cast<std::size_t>(i)];
    };

    // Face flux of the chemotaxis term, q_{i+1/2} = w_face * u_x|_{i+1/2}.
    auto flux = [&](long i) -> double {
        if (cfg.boundary == BoundaryMode::ZeroFlux &&
            (i < 0 || i >= static_cast<long>(n) - 1))
            return 0.0;
        const double ux = (u_at(i + 1) - u_at(i)) * inv_dx;
        double wf;
        if (cfg.upwind)
            wf = ux > 0.0 ? w_at(i) : w_at(i + 1);
        else
            wf = 0.5 * (w_at(i) + w_at(i + 1));
        return wf * ux;
    };

    const double c = p.c();
    for (std::size_t i = 0; i < n; ++i) {
        const long li = static_cast<long>(i);
        double du = 0.0, dw = 0.0;
        if (cfg.kinetics_enabled) {
            du += f.u[i] * kinetic_f(f.u[i], f.w[i]);
            dw += p.alpha() * f.w[i] * (p.beta() * f.u[i] - 1.0);
        }
        dw -= (flux(li) - flux(li - 1)) * inv_dx;
        if (cfg.eps > 0.0) {
            du += cfg.eps * (u_at(li + 1) - 2.0 * f.u[i] + u_at(li - 1)) * inv_dx2;
            dw += cfg.eps * (w_at(li + 1) - 2.0 * f.w[i] + w_at(li - 1)) * inv_dx2;
        }
        if (cfg.frame == FrameMode::Comoving) {
            if (cfg.upwind) {
                // characteristics run leftward: one-sided forward differences
                du += c * (u_at(li + 1) - f.u[i]) * inv_dx;
                dw += c * (w_at(li + 1) - f.w[i]) * inv_dx;
            } else {
                // second order; the eps diffusion stabilises the dispersion
                // and avoids first-order numerical diffusion ~ c dx / 2,
                // which would swamp small eps
                du += c * (u_at(li + 1) - u_at(li - 1)) * 0.5 * inv_dx;
                dw += c * (w_at(li + 1) - w_at(li - 1)) * 0.5 * inv_dx;
            }
        }
        dudt[i] = du;
        dwdt[i] = dw;
    }

    if (cfg.boundary == BoundaryMode::ClampedToStates) {
        dudt[0] = dwdt[0] = 0.0;
        dudt[n - 1] = dwdt[n - 1] = 0.0;
    }
}

namespace {

double stable_dt(const Field1D& f, const ModelParams& p, const PdeConfig& cfg) {
    double a_max = cfg.frame == FrameMode::Comoving ? p.c() : 0.0;
    for (std::size_t i = 0; i + 1 < f.size(); ++i)
        a_max = std::max(a_max, std::abs(f.u[i + 1] - f.u[i]) / f.dx);
    double dt = cfg.max_dt;
    if (a_max > 0.0) dt = std::min(dt, cfg.cfl_safety * f.dx / a_max);
    if (cfg.eps > 0.0) dt = std::min(dt, cfg.cfl_safety * f.dx * f.dx / (2.0 * cfg.eps));
    if (!(dt > 1e-12)) throw std::runtime_error("step_to: dt underflow");
    return dt;
}

void axpy_field(Field1D& f, const Field1D& base, double a, const std::vector<double>& du,
                const std::vector<double>& dw) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        f.u[i] = base.u[i] + a * du[i];
        f.w[i] = base.w[i] + a * dw[i];
    }
}

}  // namespace

Field1D step_to(Field1D f, double t_end, const ModelParams& p, const PdeConfig& cfg) {
    validate(cfg);
    std::vector<double> k1u, k1w, k2u, k2w, k3u, k3w, k4u, k4w;
    Field1D tmp = f;
    while (f.t < t_end - 1e-14) {
        const double dt = std::min(stable_dt(f, p, cfg), t_end - f.t);
        semidiscrete_rhs(f, p, cfg, k1u, k1w);
        axpy_field(tmp, f, 0.5 * dt, k1u, k1w);
        semidiscrete_rhs(tmp, p, cfg, k2u, k2w);
        axpy_field(tmp, f, 0.5 * dt, k2u, k2w);
        semidiscrete_rhs(tmp, p, cfg, k3u, k3w);
        axpy_field(tmp, f, dt, k3u, k3w);
        semidiscrete_rhs(tmp, p, cfg, k4u, k4w);
        for (std::size_t i = 0; i < f.size(); ++i) {
            f.u[i] += dt / 6.0 * (k1u[i] + 2.0 * k2u[i] + 2.0 * k3u[i] + k4u[i]);
            f.w[i] += dt / 6.0 * (k1w[i] + 2.0 * k2w[i] + 2.0 * k3w[i] + k4w[i]);
        }
        f.t += dt;
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!std::isfinite(f.u[i]) || !std::isfinite(f.w[i]))
                throw SimulationBlowup("step_to: non-finite value at t = " + std::to_string(f.t),
                                       f);
    }
    return f;
}

Field1D seed_from_orbit(const SingularOrbit& orbit, const ModelParams& p, const PdeConfig& cfg) {
    validate(cfg);
    if (orbit.samples.size() < 4)
        throw std::invalid_argument("seed_from_orbit: orbit lacks full z-extent");

    Field1D f;
    f.x0 = 0.0;
    f.dx = cfg.L / (cfg.N - 1);
    f.u.resize(static_cast<std::size_t>(cfg.N));
    f.w.resize(static_cast<std::size_t>(cfg.N));
    f.t = 0.0;

    const auto& s = orbit.samples;
    const double x_front = cfg.L / 2.0;  // maps to orbit z = 0

    // Inner shock profile, when applicable: w against the fast coordinate y.
    std::vector<double> fy, fw;
    double z_jump = 0.0;
    if (orbit.kind == WaveKind::Shock && orbit.jump && cfg.eps > 0.0) {
        const auto fibre = integrate_layer_fibre(orbit.jump->u_star, orbit.jump->w_depart, p);
        for (const auto& fs : fibre) {
            fy.push_back(fs.y);
            fw.push_back(fs.s.w);
        }
        for (std::size_t k = 1; k < s.size(); ++k)
            if (s[k].z == s[k - 1].z && s[k].arc_id != s[k - 1].arc_id) z_jump = s[k].z;
    }

    auto sample_orbit = [&](double z, double& u, double& w) {
        if (z <= s.front().z) {
            u = orbit.start_state.u;
            w = orbit.start_state.w;
            return;
        }
        if (z >= s.back().z) {
            u = orbit.end_state.u;
            w = orbit.end_state.w;
            return;
        }
        std::size_t k = 1;
        while (k < s.size() - 1 && s[k].z < z) ++k;
        const double dz = s[k].z - s[k - 1].z;
        const double t = dz > 0.0 ? (z - s[k - 1].z) / dz : 1.0;
        u = s[k - 1].u + t * (s[k].u - s[k - 1].u);
        w = s[k - 1].w + t * (s[k].w - s[k - 1].w);
    };

    for (int i = 0; i < cfg.N; ++i) {
        const double z = f.x_at(static_cast<std::size_t>(i)) - x_front;
        double u, w;
        sample_orbit(z, u, w);
        if (!fy.empty() && z >= z_jump) {
            // Composite expansion: slow profile plus the decaying inner
            // correction fibre_w(y) - w_land at width O(eps).
            const double y = (z - z_jump) / cfg.eps;
            if (y <= fy.back()) {
                const auto it = std::lower_bound(fy.begin(), fy.end(), y);
                if (it != fy.begin() && it != fy.end()) {
                    const std::size_t k = static_cast<std::size_t>(it - fy.begin());
                    const double t = (y - fy[k - 1]) / (fy[k] - fy[k - 1]);
                    w += fw[k - 1] + t * (fw[k] - fw[k - 1]) - fw.back();
                }
            }
        }
        f.u[static_cast<std::size_t>(i)] = u;
        f.w[static_cast<std::size_t>(i)] = w;
    }
    return f;
}

double front_location(const Field1D& f, const ModelParams& p) {
    const double level = 0.5 * (1.0 + 1.0 / p.beta());
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        const double a = f.u[i] - level, b = f.u[i + 1] - level;
        if (a == 0.0) return f.x_at(i);
        if ((a < 0.0) != (b < 0.0)) {
            const double t = a / (a - b);
            return f.x_at(i) + t * f.dx;
        }
    }
    throw std::runtime_error("front_location: level not crossed (wave destroyed)");
}

SpeedFit measure_wavespeed(const std::vector<Field1D>& history, const ModelParams& p,
                           const PdeConfig& cfg) {
    SpeedFit fit;
    for (const auto& f : history) {
        fit.times.push_back(f.t);
        fit.fronts.push_back(front_location(f, p));
    }
    const std::size_t n = fit.times.size();
    if (n < 2) throw std::invalid_argument("measure_wavespeed: need at least two snapshots");
    double st = 0.0, sx = 0.0, stt = 0.0, stx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        st += fit.times[i];
        sx += fit.fronts[i];
        stt += fit.times[i] * fit.times[i];
        stx += fit.times[i] * fit.fronts[i];
    }
    const double den = n * stt - st * st;
    if (den == 0.0) throw std::invalid_argument("measure_wavespeed: degenerate time series");
    const double slope = (n * stx - st * sx) / den;
    const double icpt = (sx - slope * st) / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = fit.fronts[i] - (icpt + slope * fit.times[i]);
        ss += r * r;
    }
    fit.residual = std::sqrt(ss / n);
    fit.speed = slope + (cfg.frame == FrameMode::Comoving ? p.c() : 0.0);
    return fit;
}

double shock_width(const Field1D& f, const ModelParams& p) {
    const std::size_t n = f.size();
    // Search near the wave front only; clamped boundaries can hold a
    // sharper mismatch kink than the shock itself.
    const double x_f = front_location(f, p);
    const double halo = 2.0;
    std::size_t i_star = 0;
    double g_max = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(f.x_at(i) - x_f) > halo) continue;
        const double g = std::abs(f.w[i + 1] - f.w[i]);
        if (g > g_max) {
            g_max = g;
            i_star = i;
        }
    }
    if (g_max == 0.0) throw std::runtime_error("shock_width: flat w profile");
    // Equivalent width: drop across the steep region divided by the peak
    // gradient. The steep region is the contiguous window where the cell
    // gradient stays above a quarter of the peak, which excludes the gentle
    // slow-arc variation on either side of the layer.
    std::size_t lo = i_star, hi = i_star + 1;
    while (lo > 0 && std::abs(f.w[lo] - f.w[lo - 1]) > 0.25 * g_max) --lo;
    while (hi + 1 < n && std::abs(f.w[hi + 1] - f.w[hi]) > 0.25 * g_max) ++hi;
    const double drop = std::abs(f.w[lo] - f.w[hi]);
    return drop * f.dx / g_max;
}

}  // namespace angio
