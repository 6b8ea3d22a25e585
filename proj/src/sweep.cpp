#include "angiowave/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace angio {

std::string census_string(const RegionLabel& lbl) {
    if (!lbl.error.empty()) return "error";
    if (lbl.canard_census.empty()) return "empty";
    std::string out;
    for (std::size_t i = 0; i < lbl.canard_census.size(); ++i) {
        if (i) out += '+';
        out += to_string(lbl.canard_census[i]);
    }
    return out;
}

RegionLabel classify_point(const ModelParams& p, const ClassifyTolerances& tol) {
    RegionLabel lbl;
    try {
        const auto rep = census(p, tol);
        for (const auto* rec : folded_singularities(rep))
            lbl.canard_census.push_back(rec->cls.folded_type);
        std::sort(lbl.canard_census.begin(), lbl.canard_census.end());
        const auto* H = find_record(rep, EquilibriumKind::Healed);
        lbl.H_side = H->cls.side;
        lbl.H_type = H->cls.linear_type;
        for (const auto& r : rep.quartic_roots)
            if (std::abs(r.imag()) <= tol.imag_tol) ++lbl.real_quartic_roots;
        if (lbl.H_type == LinearType::Degenerate || lbl.H_side == Side::OnFold)
            lbl.degenerate = true;
        for (const auto* rec : folded_singularities(rep))
            if (rec->cls.folded_type == FoldedType::FoldedDegenerate) lbl.degenerate = true;
        // Roots whose imaginary part sits inside the tolerance band are a
        // realness call the grid should not guess.
        for (const auto& r : rep.quartic_roots) {
            const double ai = std::abs(r.imag());
            if (ai > tol.imag_tol && ai < 10.0 * tol.imag_tol) lbl.degenerate = true;
        }
    } catch (const std::exception& e) {
        lbl.error = e.what();
    }
    return lbl;
}

double SweepGrid::alpha_at(int i) const {
    return alpha_min + (alpha_max - alpha_min) * (i + 1.0) / n_alpha;
}

double SweepGrid::c_at(int j) const { return c_min + (c_max - c_min) * (j + 1.0) / n_c; }

SweepGrid sweep(double beta, double alpha_min, double alpha_max, double c_min, double c_max,
                int n_alpha, int n_c, int jobs) {
    if (!(beta > 1.0)) throw std::invalid_argument("sweep: beta must be > 1");
    if (n_alpha < 2 || n_c < 2) throw std::invalid_argument("sweep: resolution must be >= 2");
    SweepGrid g;
    g.beta = beta;
    g.alpha_min = alpha_min;
    g.alpha_max = alpha_max;
    g.c_min = c_min;
    g.c_max = c_max;
    g.n_alpha = n_alpha;
    g.n_c = n_c;
    g.cells.resize(static_cast<std::size_t>(n_alpha) * n_c);

    const int workers = std::max(1, jobs);
    std::atomic<int> next_row{0};
    auto run_rows = [&]() {
        for (int j = next_row.fetch_add(1); j < n_c; j = next_row.fetch_add(1)) {
            const double c = g.c_at(j);
            for (int i = 0; i < n_alpha; ++i) {
                const double a = g.alpha_at(i);
                RegionLabel lbl;
                try {
                    lbl = classify_point(ModelParams(a, beta, c));
                } catch (const std::exception& e) {
                    lbl.error = e.what();
                }
                g.cells[static_cast<std::size_t>(j) * n_alpha + i] = std::move(lbl);
            }
        }
    };
    if (workers == 1) {
        run_rows();
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < workers; ++k) pool.emplace_back(run_rows);
        for (auto& t : pool) t.join();
    }
    return g;
}

std::vector<BoundarySegment> boundaries(const SweepGrid& g) {
    std::vector<BoundarySegment> out;
    auto usable = [](const RegionLabel& l) { return l.error.empty() && !l.degenerate; };
    const double da = (g.alpha_max - g.alpha_min) / g.n_alpha;
    const double dc = (g.c_max - g.c_min) / g.n_c;
    auto emit = [&](int i0, int j0, int i1, int j1) {
        const auto& a = g.at(i0, j0);
        const auto& b = g.at(i1, j1);
        if (!usable(a) || !usable(b) || a == b) return;
        BoundarySegment s;
        const double am = 0.5 * (g.alpha_at(i0) + g.alpha_at(i1));
        const double cm = 0.5 * (g.c_at(j0) + g.c_at(j1));
        if (j0 == j1) {  // vertical edge between horizontal neighbours
            s.alpha0 = s.alpha1 = am;
            s.c0 = cm - 0.5 * dc;
            s.c1 = cm + 0.5 * dc;
        } else {
            s.c0 = s.c1 = cm;
            s.alpha0 = am - 0.5 * da;
            s.alpha1 = am + 0.5 * da;
        }
        s.label = a.canard_census != b.canard_census ? "census-change" : "H-change";
        out.push_back(s);
    };
    for (int j = 0; j < g.n_c; ++j)
        for (int i = 0; i + 1 < g.n_alpha; ++i) emit(i, j, i + 1, j);
    for (int j = 0; j + 1 < g.n_c; ++j)
        for (int i = 0; i < g.n_alpha; ++i) emit(i, j, i, j + 1);
    return out;
}

std::string to_string(BifurcationKind k) {
    switch (k) {
        case BifurcationKind::FsnI: return "FSN-I";
        case BifurcationKind::FsnII: return "FSN-II";
        case BifurcationKind::Other: return "other";
    }
    return "?";
}

namespace {

// Minimum pairwise gap between real positive physical fold roots and their
// distance to H and to the census-window edges; small values flag which
// collision produced the event.
struct RootGeometry {
    double min_pair_gap = 1e9;   // real-root pair separation
    double min_to_H = 1e9;       // fold-root distance to u_H
    double min_to_edge = 1e9;    // distance to u = u_C0 or w = 0
    double min_imag = 1e9;       // smallest |imag| among complex roots
};

RootGeometry root_geometry(const ModelParams& p) {
    RootGeometry rg;
    const auto roots = hole_roots(p);
    const double uC0 = wall_u_zero(p);
    const double uH = 1.0 / p.beta();
    std::vector<double> reals;
    for (const auto& r : roots) {
        if (std::abs(r.imag()) < 1e-7) {
            reals.push_back(r.real());
        } else {
            rg.min_imag = std::min(rg.min_imag, std::abs(r.imag()));
        }
    }
    for (std::size_t i = 0; i < reals.size(); ++i) {
        for (std::size_t k = i + 1; k < reals.size(); ++k)
            rg.min_pair_gap = std::min(rg.min_pair_gap, std::abs(reals[i] - reals[k]));
        if (reals[i] > 0.0 && reals[i] < uC0) {
            rg.min_to_H = std::min(rg.min_to_H, std::abs(reals[i] - uH));
            rg.min_to_edge = std::min(rg.min_to_edge,
                                      std::min(std::abs(reals[i] - uC0), std::abs(reals[i])));
            const double w = wall_F(reals[i], p);
            rg.min_to_edge = std::min(rg.min_to_edge, std::abs(w));
        }
    }
    return rg;
}

}  // namespace

BifurcationPoint locate_bifurcation(const ModelParams& p0, const ModelParams& p1,
                                    const std::function<bool(const ModelParams&)>& predicate) {
    auto at = [&](double t) {
        return ModelParams(p0.alpha() + t * (p1.alpha() - p0.alpha()), p0.beta(),
                           p0.c() + t * (p1.c() - p0.c()), p0.eps());
    };
    const bool v0 = predicate(p0);
    if (predicate(p1) == v0)
        throw std::invalid_argument("locate_bifurcation: predicate agrees at both endpoints");

    double lo = 0.0, hi = 1.0;
    const double span = std::max(std::abs(p1.alpha() - p0.alpha()), std::abs(p1.c() - p0.c()));
    while ((hi - lo) * span > 1e-8) {
        const double mid = 0.5 * (lo + hi);
        if (predicate(at(mid)) == v0)
            lo = mid;
        else
            hi = mid;
    }
    const double t_star = 0.5 * (lo + hi);
    const ModelParams p_star = at(t_star);

    BifurcationPoint bp{p_star, BifurcationKind::Other};
    const auto rg = root_geometry(p_star);
    const double h_gap = std::abs(p_star.c() - curve_c1(p_star.beta()));
    if (rg.min_to_H < 1e-4 || h_gap * span < 1e-6)
        bp.kind = BifurcationKind::FsnII;
    else if (rg.min_pair_gap < 1e-3 || rg.min_imag < 1e-3 || rg.min_to_edge < 1e-4)
        bp.kind = BifurcationKind::FsnI;
    return bp;
}

}  // namespace angio
