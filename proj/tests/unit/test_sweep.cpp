#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "angiowave/sweep.hpp"

using namespace angio;

TEST_CASE("point classification at the published points") {
    {
        const auto lbl = classify_point(ModelParams(0.4, 2.5, 1.0));
        CHECK(lbl.canard_census.empty());
        CHECK(census_string(lbl) == "empty");
        CHECK(lbl.H_side == Side::Attracting);
        CHECK(lbl.H_type == LinearType::UnstableFocus);
        CHECK(lbl.real_quartic_roots == 0);
        CHECK_FALSE(lbl.degenerate);
        CHECK(lbl.error.empty());
    }
    {
        const auto lbl = classify_point(ModelParams(0.4, 2.5, std::sqrt(2.0) / 2.0));
        REQUIRE(lbl.canard_census.size() == 2);
        CHECK(census_string(lbl) == "folded-saddle+folded-focus");
        CHECK(lbl.H_side == Side::Attracting);
        CHECK(lbl.real_quartic_roots == 2);
    }
    {
        // healed state below the fold-crossing curve sits on S_r
        const auto lbl = classify_point(ModelParams(0.7, 10.0 / 7.0, 0.24));
        CHECK(lbl.H_side == Side::Repelling);
    }
}

TEST_CASE("sweep is deterministic and parallel-safe") {
    const auto a = sweep(2.5, 0.0, 2.0, 0.0, 2.0, 24, 24, 1);
    const auto b = sweep(2.5, 0.0, 2.0, 0.0, 2.0, 24, 24, 4);
    REQUIRE(a.cells.size() == 24 * 24);
    REQUIRE(b.cells.size() == a.cells.size());
    for (std::size_t i = 0; i < a.cells.size(); ++i) {
        CHECK(a.cells[i] == b.cells[i]);
        CHECK(a.cells[i].error == b.cells[i].error);
    }
}

TEST_CASE("sweep regularity on a coarse grid") {
    const auto grid = sweep(2.5, 0.0, 2.0, 0.0, 2.0, 40, 40, 4);
    int folded_saddles = 0, empties = 0;
    for (const auto& cell : grid.cells) {
        if (!cell.error.empty() || cell.degenerate) continue;
        const bool has_saddle =
            std::find(cell.canard_census.begin(), cell.canard_census.end(),
                      FoldedType::FoldedSaddle) != cell.canard_census.end();
        if (has_saddle) {
            ++folded_saddles;
            CHECK(cell.H_side == Side::Attracting);
        }
        if (cell.canard_census.empty()) {
            ++empties;
            CHECK(cell.real_quartic_roots == 0);
        }
    }
    CHECK(folded_saddles > 0);
    CHECK(empties > 0);
}

TEST_CASE("census transition along a vertical parameter line") {
    // at alpha = 0.4, beta = 2.5 the two-canard census empties out as c
    // increases through a value between sqrt(2)/2 and 1
    const ModelParams lo(0.4, 2.5, std::sqrt(2.0) / 2.0);
    const ModelParams hi(0.4, 2.5, 1.0);
    CHECK(classify_point(lo).canard_census.size() == 2);
    CHECK(classify_point(hi).canard_census.empty());
    const auto bp = locate_bifurcation(lo, hi, [](const ModelParams& p) {
        return !classify_point(p).canard_census.empty();
    });
    CHECK(bp.params.c() > std::sqrt(2.0) / 2.0);
    CHECK(bp.params.c() < 1.0);
    CHECK(bp.kind == BifurcationKind::FsnI);

    // the located c agrees with the vanishing of the quartic discriminant,
    // evaluated as the product of squared root differences
    auto disc = [](const ModelParams& p) {
        const auto r = hole_roots(p);
        std::complex<double> d = 1.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) d *= (r[i] - r[j]) * (r[i] - r[j]);
        return d.real();
    };
    double a = std::sqrt(2.0) / 2.0, b = 1.0;
    REQUIRE(disc(lo) * disc(hi) < 0.0);
    while (b - a > 1e-10) {
        const double m = 0.5 * (a + b);
        (disc(lo.with_c(a)) * disc(lo.with_c(m)) <= 0.0 ? b : a) = m;
    }
    CHECK(std::abs(bp.params.c() - 0.5 * (a + b)) <= 1e-6);
}

TEST_CASE("healed state type flips across the node-focus curve") {
    const double c2 = *curve_c2(0.4, 2.5);
    const auto below = classify_point(ModelParams(0.4, 2.5, c2 - 0.02));
    const auto above = classify_point(ModelParams(0.4, 2.5, c2 + 0.02));
    CHECK(below.H_type != above.H_type);
    const bool below_node = below.H_type == LinearType::StableNode ||
                            below.H_type == LinearType::UnstableNode;
    const bool above_focus = above.H_type == LinearType::StableFocus ||
                             above.H_type == LinearType::UnstableFocus;
    CHECK(below_node);
    CHECK(above_focus);
}

TEST_CASE("healed-state fold crossing located to closed form") {
    const double c1 = curve_c1(2.5);
    const auto bp = locate_bifurcation(
        ModelParams(0.4, 2.5, c1 - 0.1), ModelParams(0.4, 2.5, c1 + 0.1),
        [](const ModelParams& p) { return classify_point(p).H_side == Side::Attracting; });
    CHECK(std::abs(bp.params.c() - c1) <= 1e-8);
    CHECK(bp.kind == BifurcationKind::FsnII);
}

TEST_CASE("census count flips across the fold-zero curve") {
    // crossing c3 a fold root leaves through w = 0 at the fold zero
    for (double alpha : {0.3, 0.4}) {
        const auto c3 = curve_c3(alpha, 2.5);
        if (!c3 || *c3 <= 0.02 || *c3 >= 1.98) continue;
        const auto below = classify_point(ModelParams(alpha, 2.5, *c3 - 5e-3));
        const auto above = classify_point(ModelParams(alpha, 2.5, *c3 + 5e-3));
        CHECK(below.canard_census.size() != above.canard_census.size());
    }
}

TEST_CASE("bifurcation bisection rejects agreeing endpoints") {
    CHECK_THROWS_AS(
        locate_bifurcation(ModelParams(0.4, 2.5, 1.0), ModelParams(0.4, 2.5, 1.2),
                           [](const ModelParams&) { return true; }),
        std::invalid_argument);
}

TEST_CASE("boundary segments separate unlike cells") {
    const auto grid = sweep(2.5, 0.0, 2.0, 0.0, 2.0, 40, 40, 4);
    const auto segs = boundaries(grid);
    CHECK(!segs.empty());
    for (const auto& s : segs) {
        CHECK((s.label == "census-change" || s.label == "H-change"));
        // segments span one cell edge
        const double len = std::hypot(s.alpha1 - s.alpha0, s.c1 - s.c0);
        CHECK(len > 0.0);
        CHECK(len < 0.11);
    }
}
