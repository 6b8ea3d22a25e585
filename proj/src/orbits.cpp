#include "angiowave/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "angiowave/rk45.hpp"

namespace angio {

std::string to_string(TerminalEvent t) {
    switch (t) {
        case TerminalEvent::ReachedTarget: return "reached-target";
        case TerminalEvent::HitFold: return "hit-fold";
        case TerminalEvent::LeftWindow: return "left-window";
        case TerminalEvent::MaxLength: return "max-length";
        case TerminalEvent::SpiralConverged: return "spiral-converged";
        case TerminalEvent::MinStep: return "min-step";
    }
    return "?";
}

std::string to_string(WaveFailure f) {
    switch (f) {
        case WaveFailure::None: return "none";
        case WaveFailure::PreconditionViolation: return "precondition-violation";
        case WaveFailure::NoConnection: return "no-connection";
        case WaveFailure::NoCanardConnection: return "no-canard-connection";
        case WaveFailure::NoJump: return "no-jump";
        case WaveFailure::TransversalityFailure: return "transversality-failure";
        case WaveFailure::FoldTouch: return "fold-touch";
    }
    return "?";
}

namespace {

double dist(const PhasePoint& a, const PhasePoint& b) {
    return std::hypot(a.u - b.u, a.w - b.w);
}

PhasePoint pp(const rk::Vec<2>& y) { return {y[0], y[1]}; }

}  // namespace

ManifoldTrace integrate_ds(const PhasePoint& start, Direction dir, const ModelParams& p,
                           const IntegratorConfig& cfg, const StopEvents& ev) {
    ManifoldTrace tr;
    tr.origin = start;
    tr.direction = dir == Direction::Forward ? +1 : -1;
    const double sgn = tr.direction;

    auto field = [&](const rk::Vec<2>& y) {
        const auto d = ds_field({y[0], y[1]}, p);
        return rk::Vec<2>{sgn * d[0], sgn * d[1]};
    };

    rk::AdaptiveOptions opt;
    opt.abs_tol = cfg.abs_tol;
    opt.rel_tol = cfg.rel_tol;
    opt.h_init = 1e-4;
    opt.h_min = cfg.min_step;
    opt.h_max = cfg.max_step;
    opt.max_steps = cfg.max_steps;

    tr.samples.push_back({0.0, start});
    double phi_prev = fold_factor(start, p);
    bool terminal_set = false;

    auto fold_masked = [&](const PhasePoint& q) {
        return ev.fold_ignore_near && dist(q, *ev.fold_ignore_near) <= ev.fold_ignore_radius;
    };

    const auto status = rk::drive<2>(
        field, {start.u, start.w}, cfg.max_arc_length, opt, [&](const rk::StepView<2>& s) {
            const double h = s.t1 - s.t0;
            const PhasePoint p1 = pp(s.y1);

            double theta_stop = 2.0;
            TerminalEvent kind = TerminalEvent::MaxLength;

            const double phi1 = fold_factor(p1, p);
            if (ev.stop_on_fold && (phi_prev > 0.0) != (phi1 > 0.0) && !fold_masked(p1)) {
                double lo = 0.0, hi = 1.0;
                while ((hi - lo) * h > 1e-12) {
                    const double mid = 0.5 * (lo + hi);
                    const auto ym = rk::hermite<2>(s.y0, s.f0, s.y1, s.f1, h, mid);
                    if ((fold_factor(pp(ym), p) > 0.0) == (phi_prev > 0.0))
                        lo = mid;
                    else
                        hi = mid;
                }
                theta_stop = 0.5 * (lo + hi);
                kind = TerminalEvent::HitFold;
            }
            if (!cfg.window.contains(p1)) {
                double lo = 0.0, hi = 1.0;
                while ((hi - lo) * h > 1e-12) {
                    const double mid = 0.5 * (lo + hi);
                    const auto ym = rk::hermite<2>(s.y0, s.f0, s.y1, s.f1, h, mid);
                    if (cfg.window.contains(pp(ym)))
                        lo = mid;
                    else
                        hi = mid;
                }
                const double theta = 0.5 * (lo + hi);
                if (theta < theta_stop) {
                    theta_stop = theta;
                    kind = TerminalEvent::LeftWindow;
                }
            }

            if (theta_stop <= 1.0) {
                const auto ye = rk::hermite<2>(s.y0, s.f0, s.y1, s.f1, h, theta_stop);
                tr.samples.push_back({sgn * (s.t0 + theta_stop * h), pp(ye)});
                tr.terminal = kind;
                terminal_set = true;
                return false;
            }

            tr.samples.push_back({sgn * s.t1, p1});
            phi_prev = phi1;

            if (ev.spiral_target && dist(p1, *ev.spiral_target) <= cfg.spiral_radius) {
                tr.samples.back().pt = *ev.spiral_target;  // snap to the equilibrium
                tr.terminal = TerminalEvent::SpiralConverged;
                terminal_set = true;
                return false;
            }
            if (ev.reach_target && dist(p1, *ev.reach_target) <= ev.reach_radius) {
                tr.samples.back().pt = *ev.reach_target;
                tr.terminal = TerminalEvent::ReachedTarget;
                terminal_set = true;
                return false;
            }
            return true;
        });

    if (!terminal_set) {
        switch (status) {
            case rk::DriveStatus::MinStepUnderflow: tr.terminal = TerminalEvent::MinStep; break;
            default: tr.terminal = TerminalEvent::MaxLength; break;
        }
    }
    return tr;
}

namespace {

std::array<double, 2> real_eigvec(const EquilibriumRecord& eq, ManifoldBranch which) {
    for (int i = 0; i < 2; ++i) {
        const bool stable = eq.eigenvalues[i].real() < 0.0;
        if (stable != (which == ManifoldBranch::Stable)) continue;
        if (std::abs(eq.eigenvalues[i].imag()) > 1e-12) continue;
        const auto& v = eq.eigenvectors[i];
        std::array<double, 2> out{v[0].real(), v[1].real()};
        const double n = std::hypot(out[0], out[1]);
        if (n == 0.0) break;
        out[0] /= n;
        out[1] /= n;
        return out;
    }
    throw std::invalid_argument("trace_saddle_manifold: requested branch has no real eigenvector");
}

}  // namespace

ManifoldTrace trace_saddle_manifold(const EquilibriumRecord& eq, ManifoldBranch which, int sign,
                                    const ModelParams& p, const IntegratorConfig& cfg,
                                    const StopEvents& ev) {
    const auto v = real_eigvec(eq, which);
    const PhasePoint start{eq.location.u + sign * cfg.delta * v[0],
                           eq.location.w + sign * cfg.delta * v[1]};
    const Direction dir = which == ManifoldBranch::Stable ? Direction::Backward : Direction::Forward;
    auto tr = integrate_ds(start, dir, p, cfg, ev);
    tr.origin = eq.location;
    return tr;
}

int branch_sign_for_side(const EquilibriumRecord& eq, ManifoldBranch which, Side side,
                         const ModelParams& p, const IntegratorConfig& cfg) {
    const auto v = real_eigvec(eq, which);
    for (int sign : {+1, -1}) {
        const PhasePoint start{eq.location.u + sign * cfg.delta * v[0],
                               eq.location.w + sign * cfg.delta * v[1]};
        const double phi = fold_factor(start, p);
        if ((side == Side::Attracting && phi > 0.0) || (side == Side::Repelling && phi < 0.0))
            return sign;
    }
    throw std::runtime_error("branch_sign_for_side: neither launch lies on the requested sheet");
}

std::vector<std::pair<double, PhasePoint>> reparameterise_to_z(const ManifoldTrace& trace,
                                                               const ModelParams& p) {
    std::vector<std::pair<double, PhasePoint>> out;
    out.reserve(trace.samples.size());
    double z = 0.0;
    double phi_prev = fold_factor(trace.samples.front().pt, p);
    out.emplace_back(z, trace.samples.front().pt);
    for (std::size_t k = 1; k < trace.samples.size(); ++k) {
        const double phi = fold_factor(trace.samples[k].pt, p);
        const double dzb = trace.samples[k].zbar - trace.samples[k - 1].zbar;
        z += 0.5 * (phi_prev + phi) * dzb;
        out.emplace_back(z, trace.samples[k].pt);
        phi_prev = phi;
    }
    if (out.size() > 1 && out.back().first < out.front().first)
        std::reverse(out.begin(), out.end());
    const double z0 = out.front().first;
    for (auto& s : out) s.first -= z0;
    return out;
}

double ArcCurve::u_min() const { return u.front(); }
double ArcCurve::u_max() const { return u.back(); }

double ArcCurve::w_at(double uq) const {
    if (u.empty()) throw std::out_of_range("ArcCurve: empty");
    if (uq < u.front() || uq > u.back()) throw std::out_of_range("ArcCurve: query outside range");
    const auto it = std::lower_bound(u.begin(), u.end(), uq);
    if (it == u.begin()) return w.front();
    const std::size_t i = static_cast<std::size_t>(it - u.begin());
    const double t = (uq - u[i - 1]) / (u[i] - u[i - 1]);
    return w[i - 1] + t * (w[i] - w[i - 1]);
}

ArcCurve monotone_arc(const ManifoldTrace& trace) {
    const auto& s = trace.samples;
    if (s.size() < 2) throw std::invalid_argument("monotone_arc: trace too short");
    // Longest run of strictly monotone u ending at the trace tail.
    std::size_t end = s.size() - 1;
    std::size_t i = end;
    const bool inc = s[end].pt.u > s[end - 1].pt.u;
    while (i > 0) {
        const double du = s[i].pt.u - s[i - 1].pt.u;
        if ((inc && du <= 0.0) || (!inc && du >= 0.0)) break;
        --i;
    }
    ArcCurve arc;
    arc.increasing = inc;
    for (std::size_t k = i; k <= end; ++k) {
        arc.u.push_back(s[k].pt.u);
        arc.w.push_back(s[k].pt.w);
    }
    if (!inc) {
        std::reverse(arc.u.begin(), arc.u.end());
        std::reverse(arc.w.begin(), arc.w.end());
    }
    return arc;
}

double transversality_check(double u_star, double w_star, const ModelParams& p) {
    if (std::abs(u_star - 1.0 / p.beta()) < 1e-12 || std::abs(u_star - 1.0) < 1e-12)
        throw std::domain_error("transversality_check: degenerate at u = 1/beta or u = 1");
    const double c2 = p.c() * p.c();
    const double den = u_star * kinetic_f(u_star, w_star) * (c2 - u_star * w_star);
    if (den == 0.0) throw std::domain_error("transversality_check: indeterminate denominator");
    return p.alpha() * c2 * (p.beta() * u_star - 1.0) * (u_star - 1.0) / den;
}

double transversality_check_geometric(double u_star, double w_star, const ModelParams& p) {
    const double w_land = 2.0 * wall_F(u_star, p) - w_star;
    auto slope = [&](double w) {
        const auto rf = reduced_field({u_star, w}, p);
        if (rf.deriv[0] == 0.0)
            throw std::domain_error("transversality_check_geometric: vertical manifold slope");
        return rf.deriv[1] / rf.deriv[0];
    };
    return 2.0 * wall_F_prime(u_star, p) - slope(w_star) - slope(w_land);
}

std::vector<FibreSample> integrate_layer_fibre(double u_star, double w_depart,
                                               const ModelParams& p, double perturb) {
    const PhasePoint dep{u_star, w_depart};
    if (fold_factor(dep, p) >= 0.0)
        throw std::invalid_argument("integrate_layer_fibre: departure point not on S_r");
    const SlowPoint s0 = embed_on_S(dep, p);
    const auto lams = layer_eigenvalues(s0, p);
    if (lams[2] <= 0.0)
        throw std::invalid_argument("integrate_layer_fibre: departure point not repelling");

    // Unstable eigendirection of the layer Jacobian: (0, u, c + lambda3).
    rk::Vec<3> dirv{0.0, s0.u, p.c() + lams[2]};
    const double n = std::sqrt(dirv[1] * dirv[1] + dirv[2] * dirv[2]);
    dirv[1] /= n;
    dirv[2] /= n;

    const double w_land = 2.0 * wall_F(u_star, p) - w_depart;

    auto field = [&](const rk::Vec<3>& y) {
        SlowPoint s;
        s.u = y[0];
        s.v = y[1];
        s.w = y[2];
        s.u_hat = s0.u_hat;
        s.w_hat = s0.w_hat;
        const auto g = layer_field(s, p);
        return rk::Vec<3>{g[0], g[1], g[2]};
    };

    for (int sign : {-1, +1}) {
        std::vector<FibreSample> out;
        rk::Vec<3> y0{s0.u + sign * perturb * dirv[0], s0.v + sign * perturb * dirv[1],
                      s0.w + sign * perturb * dirv[2]};
        rk::AdaptiveOptions opt;
        opt.abs_tol = 1e-12;
        opt.rel_tol = 1e-10;
        opt.h_max = 1.0;
        opt.max_steps = 2000000;
        bool converged = false, diverged = false;
        auto record = [&](double y, const rk::Vec<3>& v) {
            SlowPoint s;
            s.u = v[0];
            s.v = v[1];
            s.w = v[2];
            s.u_hat = s0.u_hat;
            s.w_hat = s0.w_hat;
            out.push_back({y, s});
        };
        record(0.0, y0);
        const double y_max = 5000.0 / std::max(lams[2], 1e-3);
        rk::drive<3>(field, y0, y_max, opt, [&](const rk::StepView<3>& s) {
            record(s.t1, s.y1);
            const auto g = field(s.y1);
            const double gn = std::abs(g[0]) + std::abs(g[1]) + std::abs(g[2]);
            if (gn < 1e-12) {
                converged = true;
                return false;
            }
            if (std::abs(s.y1[0]) + std::abs(s.y1[1]) + std::abs(s.y1[2]) > 50.0) {
                diverged = true;
                return false;
            }
            return true;
        });
        if (converged && std::abs(out.back().s.w - w_land) < 1e-5) return out;
        (void)diverged;
    }
    throw std::runtime_error("integrate_layer_fibre: fibre failed to land on S_a (inadmissible jump)");
}

namespace {

// ---- orbit assembly ------------------------------------------------------

double manifold_slope(const PhasePoint& q, const ModelParams& p) {
    const auto rf = reduced_field(q, p);
    return rf.deriv[1] / rf.deriv[0];
}

std::optional<JumpRecord> solve_jump(const ArcCurve& wr, const ArcCurve& wa,
                                     const ModelParams& p) {
    const double lo = std::max(wr.u_min(), wa.u_min()) + 1e-12;
    const double hi = std::min(wr.u_max(), wa.u_max()) - 1e-12;
    if (!(hi > lo)) return std::nullopt;
    auto g = [&](double u) { return wr.w_at(u) + wa.w_at(u) - 2.0 * wall_F(u, p); };

    const int n = 8192;
    double a = lo, ga = g(lo);
    double b = 0.0, gb = 0.0;
    bool found = false;
    for (int i = 1; i <= n; ++i) {
        b = lo + (hi - lo) * i / n;
        gb = g(b);
        if (ga == 0.0 || (ga > 0.0) != (gb > 0.0)) {
            found = true;
            break;
        }
        a = b;
        ga = gb;
    }
    if (!found) {
        // No interior sign change: the root may sit marginally beyond the
        // landing arc (published wavespeeds are 2-decimal truncations).
        // Accept the nearest endpoint when the residual there is small.
        const double slack = 0.02;
        const double g_lo = g(lo), g_hi = g(hi);
        const double u_end = std::abs(g_hi) <= std::abs(g_lo) ? hi : lo;
        const double g_end = std::abs(g_hi) <= std::abs(g_lo) ? g_hi : g_lo;
        if (std::abs(g_end) >= slack) return std::nullopt;
        return JumpRecord{u_end, wr.w_at(u_end), wa.w_at(u_end), g_end};
    }

    while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double gm = g(mid);
        if (gm == 0.0 || (gm > 0.0) == (ga > 0.0)) {
            a = mid;
            ga = gm;
        } else {
            b = mid;
        }
    }
    double u_star = 0.5 * (a + b);

    // One Newton polish with analytic manifold slopes from the reduced flow.
    try {
        const double gp = manifold_slope({u_star, wr.w_at(u_star)}, p) +
                          manifold_slope({u_star, wa.w_at(u_star)}, p) -
                          2.0 * wall_F_prime(u_star, p);
        if (std::isfinite(gp) && gp != 0.0) {
            const double u_new = u_star - g(u_star) / gp;
            if (u_new > lo && u_new < hi) u_star = u_new;
        }
    } catch (const FoldProximityError&) {
        // keep the bisection value
    }

    return JumpRecord{u_star, wr.w_at(u_star), wa.w_at(u_star)};
}

// Append trace samples (already in orbit order) with z from trapezoidal
// quadrature of the fold factor against z-bar.
void append_arc(SingularOrbit& orb, const std::vector<TraceSample>& ordered, const ModelParams& p,
                int arc_id, double& z, bool skip_first) {
    double phi_prev = 0.0;
    double zbar_prev = 0.0;
    bool have_prev = false;
    if (!orb.samples.empty() && skip_first && !ordered.empty()) {
        phi_prev = fold_factor(ordered.front().pt, p);
        zbar_prev = ordered.front().zbar;
        have_prev = true;
    }
    for (std::size_t k = skip_first ? 1 : 0; k < ordered.size(); ++k) {
        const auto& s = ordered[k];
        const double phi = fold_factor(s.pt, p);
        if (have_prev) z += 0.5 * (phi_prev + phi) * (s.zbar - zbar_prev);
        OrbitSample os;
        os.z = z;
        os.u = s.pt.u;
        os.w = s.pt.w;
        os.v = s.pt.u == 0.0 ? 0.0 : -s.pt.u * kinetic_f(s.pt.u, s.pt.w) / p.c();
        os.side = phi > 0.0 ? Side::Attracting : (phi < 0.0 ? Side::Repelling : Side::OnFold);
        os.arc_id = arc_id;
        orb.samples.push_back(os);
        phi_prev = phi;
        zbar_prev = s.zbar;
        have_prev = true;
    }
}

std::vector<TraceSample> reversed(const std::vector<TraceSample>& v) {
    return {v.rbegin(), v.rend()};
}

// Truncate a trace (in stored order) at the first crossing of u = u_cut and
// replace the cut sample by the interpolated point (u_cut, w_cut).
std::vector<TraceSample> truncate_at_u(const std::vector<TraceSample>& v, double u_cut,
                                       double w_cut) {
    std::vector<TraceSample> out;
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0) {
            const double u0 = v[k - 1].pt.u, u1 = v[k].pt.u;
            if ((u0 - u_cut) * (u1 - u_cut) <= 0.0 && u0 != u1) {
                const double t = (u_cut - u0) / (u1 - u0);
                const double zb = v[k - 1].zbar + t * (v[k].zbar - v[k - 1].zbar);
                out.push_back({zb, {u_cut, w_cut}});
                return out;
            }
        }
        out.push_back(v[k]);
    }
    return out;
}

void anchor_z(SingularOrbit& orb, double z0) {
    for (auto& s : orb.samples) s.z -= z0;
}

// Shift z = 0 to where u crosses the midpoint of its limit values.
void anchor_at_mid_u(SingularOrbit& orb) {
    const double level = 0.5 * (orb.start_state.u + orb.end_state.u);
    double z0 = orb.samples.front().z;
    for (std::size_t k = 1; k < orb.samples.size(); ++k) {
        const double a = orb.samples[k - 1].u - level;
        const double b = orb.samples[k].u - level;
        if ((a <= 0.0) != (b <= 0.0)) {
            const double t = a / (a - b);
            z0 = orb.samples[k - 1].z + t * (orb.samples[k].z - orb.samples[k - 1].z);
            break;
        }
    }
    anchor_z(orb, z0);
}

}  // namespace

WaveResult construct_smooth_wave(const ModelParams& p, const IntegratorConfig& cfg) {
    WaveResult res;
    const auto rep = census(p);
    const auto* H = find_record(rep, EquilibriumKind::Healed);
    const auto* W = find_record(rep, EquilibriumKind::Wounded);
    if (H->cls.side != Side::Attracting) {
        res.failure = WaveFailure::PreconditionViolation;
        res.message = "healed state not on the attracting sheet";
        return res;
    }

    const auto v = real_eigvec(*W, ManifoldBranch::Stable);
    const int sign = v[1] > 0.0 ? +1 : -1;  // branch entering the positive quadrant

    StopEvents ev;
    ev.stop_on_fold = true;
    ev.spiral_target = H->location;
    const auto tr = trace_saddle_manifold(*W, ManifoldBranch::Stable, sign, p, cfg, ev);
    if (tr.terminal != TerminalEvent::SpiralConverged) {
        res.failure = WaveFailure::NoConnection;
        res.message = "backward trace from W terminated with " + to_string(tr.terminal);
        return res;
    }

    SingularOrbit orb;
    orb.kind = WaveKind::Smooth;
    orb.start_state = H->location;
    orb.end_state = W->location;
    double z = 0.0;
    auto ordered = reversed(tr.samples);
    ordered.push_back({ordered.back().zbar + cfg.delta, W->location});  // close onto W
    append_arc(orb, ordered, p, 0, z, false);
    anchor_at_mid_u(orb);
    res.orbit = std::move(orb);
    return res;
}

WaveResult construct_shock_wave(const ModelParams& p, const IntegratorConfig& cfg) {
    WaveResult res;
    const auto rep = census(p);
    const auto* H = find_record(rep, EquilibriumKind::Healed);
    const auto* W = find_record(rep, EquilibriumKind::Wounded);
    if (H->cls.side != Side::Attracting) {
        res.failure = WaveFailure::PreconditionViolation;
        res.message = "healed state not on the attracting sheet";
        return res;
    }
    const EquilibriumRecord* saddle = nullptr;
    for (const auto* rec : folded_singularities(rep))
        if (rec->cls.folded_type == FoldedType::FoldedSaddle) saddle = rec;
    if (!saddle) {
        res.failure = WaveFailure::NoCanardConnection;
        res.message = "no folded saddle in the open positive quadrant";
        return res;
    }

    // Arc 1: attracting-sheet stable branch of the folded saddle, backward
    // z-bar, spiralling into H.
    StopEvents ev1;
    ev1.stop_on_fold = true;
    ev1.spiral_target = H->location;
    ev1.fold_ignore_near = saddle->location;
    const int s_a_sign =
        branch_sign_for_side(*saddle, ManifoldBranch::Stable, Side::Attracting, p, cfg);
    const auto arc1 = trace_saddle_manifold(*saddle, ManifoldBranch::Stable, s_a_sign, p, cfg, ev1);
    if (arc1.terminal != TerminalEvent::SpiralConverged) {
        res.failure = WaveFailure::NoCanardConnection;
        res.message = "canard arc failed to reach H: " + to_string(arc1.terminal);
        return res;
    }

    // Arc 2: canard continuation, the repelling-sheet stable branch.
    StopEvents ev2;
    ev2.stop_on_fold = true;
    ev2.fold_ignore_near = saddle->location;
    const auto arc2 = trace_saddle_manifold(*saddle, ManifoldBranch::Stable, -s_a_sign, p, cfg, ev2);
    if (arc2.terminal != TerminalEvent::HitFold && arc2.terminal != TerminalEvent::LeftWindow) {
        res.failure = WaveFailure::FoldTouch;
        res.message = "canard continuation terminated with " + to_string(arc2.terminal);
        return res;
    }

    // Arc 3: stable manifold of W, backward from W.
    StopEvents ev3;
    ev3.stop_on_fold = true;
    const auto vW = real_eigvec(*W, ManifoldBranch::Stable);
    const int w_sign = vW[1] > 0.0 ? +1 : -1;
    const auto arc3 = trace_saddle_manifold(*W, ManifoldBranch::Stable, w_sign, p, cfg, ev3);
    if (arc3.terminal != TerminalEvent::HitFold && arc3.terminal != TerminalEvent::LeftWindow) {
        res.failure = WaveFailure::NoJump;
        res.message = "stable manifold of W terminated with " + to_string(arc3.terminal);
        return res;
    }

    ShockDetail detail{monotone_arc(arc2), monotone_arc(arc3)};
    const auto jump = solve_jump(detail.depart_arc, detail.landing_arc, p);
    res.detail = detail;
    if (!jump) {
        res.failure = WaveFailure::NoJump;
        res.message = "jump matching function has no sign change on the manifold overlap";
        return res;
    }
    const double F_star = wall_F(jump->u_star, p);
    if (!(jump->w_depart > F_star && F_star > jump->w_land)) {
        res.failure = WaveFailure::FoldTouch;
        res.message = "jump candidate violates the S_r -> S_a direction";
        return res;
    }

    SingularOrbit orb;
    orb.kind = WaveKind::Shock;
    orb.start_state = H->location;
    orb.end_state = W->location;
    orb.jump = *jump;
    orb.canard_fold_u = arc2.terminal == TerminalEvent::HitFold ? arc2.samples.back().pt.u : 0.0;
    orb.landing_fold_u = arc3.terminal == TerminalEvent::HitFold ? arc3.samples.back().pt.u : 0.0;

    try {
        orb.transversality = transversality_check(jump->u_star, jump->w_depart, p);
    } catch (const std::domain_error&) {
        orb.transversality_degenerate = true;
    }
    if (!orb.transversality_degenerate && std::abs(orb.transversality) < 1e-8) {
        res.failure = WaveFailure::TransversalityFailure;
        res.message = "transversality value vanishes at the jump";
        return res;
    }

    double z = 0.0;
    auto a1 = reversed(arc1.samples);
    a1.push_back({a1.back().zbar + cfg.delta, saddle->location});
    append_arc(orb, a1, p, 0, z, false);

    auto a2 = truncate_at_u(arc2.samples, jump->u_star, jump->w_depart);
    append_arc(orb, a2, p, 1, z, false);
    const double z_jump = z;

    // The shock: two rows at equal z and u.
    auto a3 = truncate_at_u(arc3.samples, jump->u_star, jump->w_land);
    auto a3r = reversed(a3);
    a3r.push_back({a3r.back().zbar + cfg.delta, W->location});
    // Re-base arc-3 z-bar so quadrature starts at the landing point.
    append_arc(orb, a3r, p, 2, z, false);

    anchor_z(orb, z_jump);
    res.orbit = std::move(orb);
    return res;
}

WaveResult construct_sr_jump_wave(const ModelParams& p, const IntegratorConfig& cfg) {
    WaveResult res;
    const auto rep = census(p);
    const auto* H = find_record(rep, EquilibriumKind::Healed);
    const auto* W = find_record(rep, EquilibriumKind::Wounded);
    if (H->cls.side != Side::Repelling) {
        res.failure = WaveFailure::PreconditionViolation;
        res.message = "healed state not on the repelling sheet";
        return res;
    }
    if (H->cls.linear_type != LinearType::Saddle) {
        res.failure = WaveFailure::PreconditionViolation;
        res.message = "healed state on S_r is not a ds saddle";
        return res;
    }

    // On S_r the z-flow is the ds flow reversed, so the wave's departing
    // manifold is the ds stable manifold of H, traced backward z-bar toward
    // increasing u.
    const auto vH = real_eigvec(*H, ManifoldBranch::Stable);
    const int h_sign = vH[0] > 0.0 ? +1 : -1;
    StopEvents evH;
    evH.stop_on_fold = true;
    const auto dep = trace_saddle_manifold(*H, ManifoldBranch::Stable, h_sign, p, cfg, evH);
    if (dep.samples.size() < 4) {
        res.failure = WaveFailure::NoConnection;
        res.message = "departing manifold of H degenerate";
        return res;
    }

    StopEvents evW;
    evW.stop_on_fold = true;
    const auto vW = real_eigvec(*W, ManifoldBranch::Stable);
    const int w_sign = vW[1] > 0.0 ? +1 : -1;
    const auto land = trace_saddle_manifold(*W, ManifoldBranch::Stable, w_sign, p, cfg, evW);

    ShockDetail detail{monotone_arc(dep), monotone_arc(land)};
    const auto jump = solve_jump(detail.depart_arc, detail.landing_arc, p);
    res.detail = detail;
    if (!jump) {
        res.failure = WaveFailure::NoJump;
        res.message = "jump matching function has no sign change on the manifold overlap";
        return res;
    }
    const double F_star = wall_F(jump->u_star, p);
    if (!(jump->w_depart > F_star && F_star > jump->w_land)) {
        res.failure = WaveFailure::FoldTouch;
        res.message = "jump candidate violates the S_r -> S_a direction";
        return res;
    }

    SingularOrbit orb;
    orb.kind = WaveKind::Shock;
    orb.start_state = H->location;
    orb.end_state = W->location;
    orb.jump = *jump;
    orb.canard_fold_u = dep.terminal == TerminalEvent::HitFold ? dep.samples.back().pt.u : 0.0;
    orb.landing_fold_u = land.terminal == TerminalEvent::HitFold ? land.samples.back().pt.u : 0.0;
    try {
        orb.transversality = transversality_check(jump->u_star, jump->w_depart, p);
    } catch (const std::domain_error&) {
        orb.transversality_degenerate = true;
    }

    double z = 0.0;
    auto a1 = truncate_at_u(dep.samples, jump->u_star, jump->w_depart);
    std::vector<TraceSample> a1full;
    a1full.push_back({a1.front().zbar - cfg.delta, H->location});
    a1full.insert(a1full.end(), a1.begin(), a1.end());
    append_arc(orb, a1full, p, 0, z, false);
    const double z_jump = z;

    auto a2 = truncate_at_u(land.samples, jump->u_star, jump->w_land);
    auto a2r = reversed(a2);
    a2r.push_back({a2r.back().zbar + cfg.delta, W->location});
    append_arc(orb, a2r, p, 1, z, false);

    anchor_z(orb, z_jump);
    res.orbit = std::move(orb);
    return res;
}

CycleScanReport scan_limit_cycles(const ModelParams& p, int n_seeds, const IntegratorConfig& cfg) {
    CycleScanReport rep;
    const auto reg = census(p);
    const PhasePoint H = find_record(reg, EquilibriumKind::Healed)->location;

    std::vector<PhasePoint> equilibria;
    for (const auto& r : reg.records) equilibria.push_back(r.location);

    const int nu = std::max(2, static_cast<int>(std::round(std::sqrt(2.0 * n_seeds))));
    const int nw = std::max(2, (n_seeds + nu - 1) / nu);

    for (int i = 0; i < nu && rep.seeds < n_seeds; ++i) {
        for (int j = 0; j < nw && rep.seeds < n_seeds; ++j) {
            const PhasePoint seed{1.5 * (i + 0.5) / nu, 1.5 * (j + 0.5) / nw};
            ++rep.seeds;

            auto field = [&](const rk::Vec<2>& y) {
                const auto d = ds_field({y[0], y[1]}, p);
                return rk::Vec<2>{d[0], d[1]};
            };
            rk::AdaptiveOptions opt;
            opt.abs_tol = 1e-9;
            opt.rel_tol = 1e-7;
            opt.h_max = cfg.max_step;
            opt.max_steps = 200000;

            std::vector<double> crossings;  // Poincare section w = w_H, u > u_H, upward
            PhasePoint last = seed;
            bool left = false, near_eq = false;
            rk::drive<2>(field, {seed.u, seed.w}, 300.0, opt, [&](const rk::StepView<2>& s) {
                const PhasePoint q{s.y1[0], s.y1[1]};
                if (!cfg.window.contains(q)) {
                    left = true;
                    return false;
                }
                for (const auto& e : equilibria)
                    if (dist(q, e) < 1e-5) {
                        near_eq = true;
                        return false;
                    }
                if ((last.w - H.w) < 0.0 && (q.w - H.w) >= 0.0 && q.u > H.u) {
                    const double t = (H.w - last.w) / (q.w - last.w);
                    crossings.push_back(last.u + t * (q.u - last.u));
                }
                last = q;
                return true;
            });

            if (left)
                ++rep.left_window;
            else if (near_eq)
                ++rep.converged_to_equilibrium;
            else
                ++rep.undecided;

            for (std::size_t k = 1; k < crossings.size(); ++k) {
                if (std::abs(crossings[k] - crossings[k - 1]) < 1e-6) {
                    bool away = true;
                    for (const auto& e : equilibria)
                        if (dist({crossings[k], H.w}, e) < 1e-2) away = false;
                    if (away) {
                        ++rep.suspected_cycles;
                        break;
                    }
                }
            }
        }
    }
    return rep;
}

std::optional<double> find_smooth_loss_c(double alpha, double beta, double c_lo, double c_hi,
                                         double tol, const IntegratorConfig& cfg) {
    auto smooth_ok = [&](double c) {
        return construct_smooth_wave(ModelParams(alpha, beta, c), cfg).failure == WaveFailure::None;
    };
    if (!smooth_ok(c_hi) || smooth_ok(c_lo)) return std::nullopt;
    while (c_hi - c_lo > tol) {
        const double mid = 0.5 * (c_lo + c_hi);
        if (smooth_ok(mid))
            c_hi = mid;
        else
            c_lo = mid;
    }
    return 0.5 * (c_lo + c_hi);
}

}  // namespace angio
