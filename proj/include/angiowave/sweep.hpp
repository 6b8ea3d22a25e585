#pragma once

// Region classification of the (alpha, c) plane at fixed beta: canard census,
// H sheet and linear type per cell, boundary extraction between unlike cells
// and bisection for bifurcation loci.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "angiowave/equilibria.hpp"
#include "angiowave/model.hpp"

namespace angio {

struct RegionLabel {
    std::vector<FoldedType> canard_census;  // sorted, folded types with 0<u<u_C0, w>0
    Side H_side = Side::Attracting;
    LinearType H_type = LinearType::Degenerate;
    bool degenerate = false;  // a classification tolerance was tripped
    int real_quartic_roots = 0;
    std::string error;  // nonempty when the census itself failed

    bool operator==(const RegionLabel& o) const {
        return canard_census == o.canard_census && H_side == o.H_side && H_type == o.H_type &&
               degenerate == o.degenerate;
    }
};

std::string census_string(const RegionLabel& lbl);  // e.g. "folded-saddle+folded-focus" or "empty"

struct SweepGrid {
    double beta = 2.5;
    double alpha_min = 0.0, alpha_max = 2.0;
    double c_min = 0.0, c_max = 2.0;
    int n_alpha = 200, n_c = 200;
    std::vector<RegionLabel> cells;  // row-major, alpha fastest

    double alpha_at(int i) const;  // cell-centre sampling of the half-open ranges
    double c_at(int j) const;
    const RegionLabel& at(int i, int j) const { return cells[static_cast<std::size_t>(j) * n_alpha + i]; }
};

struct BoundarySegment {
    double alpha0, c0, alpha1, c1;  // midpoint segment between unlike cells
    std::string label;              // "census-change" or "H-change"
};

RegionLabel classify_point(const ModelParams& p, const ClassifyTolerances& tol = {});

SweepGrid sweep(double beta, double alpha_min, double alpha_max, double c_min, double c_max,
                int n_alpha, int n_c, int jobs = 1);

std::vector<BoundarySegment> boundaries(const SweepGrid& grid);

enum class BifurcationKind { FsnI, FsnII, Other };

std::string to_string(BifurcationKind k);

struct BifurcationPoint {
    ModelParams params;
    BifurcationKind kind = BifurcationKind::Other;
};

/// Bisect the segment p0 -> p1 (linear in alpha, c; beta, eps fixed from p0)
/// for the predicate flip, to 1e-8 in the segment parameter. Labels the event
/// FSN-II when a fold root collides with H, FSN-I when a root pair collides
/// or a root crosses u_C0 / w = 0. Throws invalid_argument when the predicate
/// agrees at both ends.
BifurcationPoint locate_bifurcation(const ModelParams& p0, const ModelParams& p1,
                                    const std::function<bool(const ModelParams&)>& predicate);

}  // namespace angio
