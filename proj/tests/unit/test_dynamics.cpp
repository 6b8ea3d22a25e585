#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "angiowave/dynamics.hpp"
#include "angiowave/model.hpp"

using namespace angio;

namespace {

ModelParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> ua(0.05, 2.0), ub(1.05, 5.0), uc(0.05, 2.0);
    return ModelParams(ua(rng), ub(rng), uc(rng));
}

}  // namespace

TEST_CASE("embedding round trip") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> uu(0.05, 2.5), uw(0.0, 2.5);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_params(rng);
        const PhasePoint pt{uu(rng), uw(rng)};
        const SlowPoint s = embed_on_S(pt, p);
        CHECK(std::abs(s.u_hat - p.c() * s.u) <= 1e-10);
        CHECK(std::abs(s.v + s.u * kinetic_f(s.u, s.w) / p.c()) <= 1e-10);
        CHECK(std::abs(s.w_hat - (p.c() * s.w - s.v * s.w)) <= 1e-10);
        const auto G = layer_field(s, p);
        for (double g : G) CHECK(std::abs(g) <= 1e-12);
    }
}

TEST_CASE("layer eigenvalue closed forms") {
    std::mt19937_64 rng(1717);
    std::uniform_real_distribution<double> uu(0.05, 2.5), uw(0.0, 2.5);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_params(rng);
        const SlowPoint s = embed_on_S({uu(rng), uw(rng)}, p);
        const auto lam = layer_eigenvalues(s, p);
        CHECK(lam[0] == -p.c());
        CHECK(lam[1] <= lam[2]);
        // lambda2 <= -c on the physically relevant part of S
        CHECK(lam[1] <= -p.c() + 1e-12);
        // compare against a QR eigensolve of the printed 3x3 Jacobian
        const auto J = layer_jacobian(s, p);
        Eigen::Matrix3d M;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) M(r, c) = J[r][c];
        Eigen::EigenSolver<Eigen::Matrix3d> es(M);
        std::array<double, 3> numeric{};
        for (int k = 0; k < 3; ++k) {
            CHECK(std::abs(es.eigenvalues()[k].imag()) < 1e-8);
            numeric[k] = es.eigenvalues()[k].real();
        }
        std::sort(numeric.begin(), numeric.end());
        std::array<double, 3> closed = lam;
        std::sort(closed.begin(), closed.end());
        for (int k = 0; k < 3; ++k) CHECK(std::abs(numeric[k] - closed[k]) <= 1e-8);
    }
    // at the wounded state the radicand vanishes: triple eigenvalue -c
    const ModelParams p(0.4, 2.5, 1.0);
    const auto lam = layer_eigenvalues(embed_on_S({1.0, 0.0}, p), p);
    CHECK(lam[1] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(lam[2] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("fold eigenvalue and sheet signs") {
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 100; ++i) {
        const ModelParams p = random_params(rng);
        std::uniform_real_distribution<double> uu(1e-2, wall_u_zero(p) - 1e-2);
        const double u = uu(rng);
        const auto lam = layer_eigenvalues(fold_point(u, p), p);
        CHECK(std::abs(lam[2]) <= 1e-10);
        // below the fold the slow eigenvalue is negative, above positive
        const double F = wall_F(u, p);
        const auto below = layer_eigenvalues(embed_on_S({u, F - 0.05}, p), p);
        const auto above = layer_eigenvalues(embed_on_S({u, F + 0.05}, p), p);
        if (F - 0.05 > 0.0) CHECK(below[2] < 0.0);
        CHECK(above[2] > 0.0);
    }
}

TEST_CASE("desingularised field invariant axes") {
    std::mt19937_64 rng(404);
    std::uniform_real_distribution<double> us(0.05, 2.0);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = random_params(rng);
        CHECK(ds_field({0.0, us(rng)}, p)[0] == 0.0);
        CHECK(ds_field({us(rng), 0.0}, p)[1] == 0.0);
    }
}

TEST_CASE("reduced flow equals desingularised flow over the fold factor") {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> uu(0.05, 2.0), uw(0.0, 2.0);
    int tested = 0;
    while (tested < 100) {
        const ModelParams p = random_params(rng);
        const PhasePoint pt{uu(rng), uw(rng)};
        const double phi = fold_factor(pt, p);
        if (std::abs(phi) < 1e-3) continue;
        ++tested;
        const auto ds = ds_field(pt, p);
        const auto red = reduced_field(pt, p);
        CHECK(std::abs(red.deriv[0] - ds[0] / phi) <=
              1e-9 * std::max(1.0, std::abs(red.deriv[0])));
        CHECK(std::abs(red.deriv[1] - ds[1] / phi) <=
              1e-9 * std::max(1.0, std::abs(red.deriv[1])));
        CHECK(red.side == (phi > 0.0 ? Side::Attracting : Side::Repelling));
    }
}

TEST_CASE("reduced flow refuses the fold") {
    const ModelParams p(0.4, 2.5, 1.0);
    const double u = 0.8;
    CHECK_THROWS_AS(reduced_field({u, wall_F(u, p)}, p), FoldProximityError);
}

TEST_CASE("desingularised w-flow points up along the physical fold") {
    // no canard roots exist at this point, so the whole physical fold
    // segment must have positive w-velocity
    const ModelParams p(0.4, 2.5, 1.0);
    const double u0 = wall_u_zero(p);
    for (double u = 0.02; u < u0 - 1e-3; u += 0.01) {
        const PhasePoint pt{u, wall_F(u, p)};
        if (pt.w <= 0.0) continue;
        CHECK(ds_field(pt, p)[1] > 0.0);
    }
}

TEST_CASE("fold non-degeneracy closed form") {
    // direct substitution at c = 1, u = 1
    const ModelParams p(0.4, 2.5, 1.0);
    CHECK(fold_nondegeneracy(1.0, p) == doctest::Approx(2.0 * std::sqrt(2.0) / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(fold_nondegeneracy(-0.1, p), std::domain_error);

    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        const ModelParams q = random_params(rng);
        std::uniform_real_distribution<double> uu(1e-2, wall_u_zero(q) - 1e-2);
        const double u = uu(rng);
        const double v = fold_nondegeneracy(u, q);  // internally cross-checked
        CHECK(v > 0.0);
        CHECK(std::abs(v - fold_nondegeneracy_direct(u, q)) <= 1e-8 * std::max(1.0, v));
    }
}

TEST_CASE("fold transversality vector") {
    std::mt19937_64 rng(14);
    for (int i = 0; i < 100; ++i) {
        const ModelParams q = random_params(rng);
        std::uniform_real_distribution<double> uu(1e-2, wall_u_zero(q) - 1e-2);
        const double u = uu(rng);
        const auto t = fold_transversality(u, q);
        CHECK(t[1] > 0.0);  // second component c/P
        const auto td = fold_transversality_direct(u, q);
        const double scale = std::max(1.0, std::hypot(t[0], t[1]));
        CHECK(std::abs(t[0] - td[0]) <= 1e-6 * scale);
        CHECK(std::abs(t[1] - td[1]) <= 1e-6 * scale);
    }
    // where F vanishes the first component vanishes with it
    const ModelParams p(0.4, 2.5, 1.0);
    const auto t = fold_transversality(wall_u_zero(p), p);
    CHECK(std::abs(t[0]) < 1e-10);
    CHECK(t[1] > 0.0);
}

TEST_CASE("u frozen along layer fibres") {
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> uu(0.05, 2.0), uw(0.0, 2.0), dv(-0.5, 0.5);
    for (int i = 0; i < 50; ++i) {
        const ModelParams p = random_params(rng);
        SlowPoint s = embed_on_S({uu(rng), uw(rng)}, p);
        s.v += dv(rng);
        s.w += dv(rng);
        const auto G = layer_field(s, p);
        CHECK(G[0] == s.u_hat - p.c() * s.u);  // independent of v, w
    }
}

TEST_CASE("composite fold diagnostics") {
    const ModelParams p(0.4, 2.5, std::sqrt(2.0) / 2.0);
    const auto d = fold_diagnostics(0.8, p);
    CHECK(d.eigenvalues[0] == -p.c());
    CHECK(std::abs(d.eigenvalues[2]) <= 1e-10);
    CHECK(d.nondegeneracy > 0.0);
    CHECK(std::hypot(d.transversality[0], d.transversality[1]) > 1e-10);
}
