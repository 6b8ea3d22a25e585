#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "angiowave/rk45.hpp"

using namespace angio::rk;

namespace {

// endpoint of y' = y on [0,1] at forced step size h (tolerances slack so
// every attempt is accepted)
double exp_endpoint(double h) {
    AdaptiveOptions opt;
    opt.abs_tol = 1e6;
    opt.rel_tol = 1e6;
    opt.h_init = h;
    opt.h_max = h;
    Vec<1> last{1.0};
    drive<1>([](const Vec<1>& y) { return Vec<1>{y[0]}; }, {1.0}, 1.0, opt,
             [&](const StepView<1>& v) {
                 last = v.y1;
                 return true;
             });
    return last[0];
}

}  // namespace

TEST_CASE("harmonic oscillator accuracy") {
    AdaptiveOptions opt;
    Vec<2> last{1.0, 0.0};
    const auto status = drive<2>(
        [](const Vec<2>& y) {
            return Vec<2>{y[1], -y[0]};
        },
        {1.0, 0.0}, 2.0 * M_PI, opt,
        [&](const StepView<2>& v) {
            last = v.y1;
            return true;
        });
    CHECK(status == DriveStatus::ReachedEnd);
    CHECK(std::abs(last[0] - 1.0) < 1e-7);
    CHECK(std::abs(last[1]) < 1e-7);
}

TEST_CASE("self-convergence order at least four") {
    const double exact = std::exp(1.0);
    const double e1 = std::abs(exp_endpoint(0.1) - exact);
    const double e2 = std::abs(exp_endpoint(0.05) - exact);
    const double e3 = std::abs(exp_endpoint(0.025) - exact);
    const double p12 = std::log2(e1 / e2);
    const double p23 = std::log2(e2 / e3);
    CHECK(p12 >= 4.0);
    CHECK(p23 >= 4.0);
}

TEST_CASE("tightening tolerances tightens the endpoint") {
    auto endpoint = [](double tol) {
        AdaptiveOptions opt;
        opt.abs_tol = tol;
        opt.rel_tol = tol;
        Vec<2> last{0.0, 1.0};
        drive<2>(
            [](const Vec<2>& y) {
                return Vec<2>{y[1], -std::sin(y[0])};
            },
            {0.0, 1.0}, 10.0, opt,
            [&](const StepView<2>& v) {
                last = v.y1;
                return true;
            });
        return last;
    };
    const auto ref = endpoint(1e-13);
    const auto loose = endpoint(1e-6);
    const auto tight = endpoint(1e-10);
    const double e_loose = std::hypot(loose[0] - ref[0], loose[1] - ref[1]);
    const double e_tight = std::hypot(tight[0] - ref[0], tight[1] - ref[1]);
    CHECK(e_tight < e_loose);
    CHECK(e_tight < 1e-7);
}

TEST_CASE("dense output reproduces cubics exactly") {
    // y(t) = t^3 - 2t^2 + 3t - 1 on a step [0, h]
    const double h = 0.7;
    auto y = [](double t) { return t * t * t - 2 * t * t + 3 * t - 1; };
    auto yp = [](double t) { return 3 * t * t - 4 * t + 3; };
    for (double theta : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        const auto v = hermite<1>({y(0)}, {yp(0)}, {y(h)}, {yp(h)}, h, theta);
        CHECK(std::abs(v[0] - y(theta * h)) < 1e-14);
    }
}

TEST_CASE("min-step underflow is reported") {
    AdaptiveOptions opt;
    opt.h_min = 1e-4;
    opt.abs_tol = 1e-14;
    opt.rel_tol = 1e-14;
    // finite-time blow-up y' = y^2, y(0) = 1 explodes at t = 1
    const auto status = drive<1>(
        [](const Vec<1>& y) {
            return Vec<1>{y[0] * y[0]};
        },
        {1.0}, 2.0, opt, [](const StepView<1>&) { return true; });
    CHECK(status == DriveStatus::MinStepUnderflow);
}

TEST_CASE("callback can stop the drive") {
    AdaptiveOptions opt;
    const auto status = drive<1>([](const Vec<1>& y) { return Vec<1>{y[0]}; }, {1.0}, 10.0, opt,
                                 [](const StepView<1>& v) { return v.y1[0] < 2.0; });
    CHECK(status == DriveStatus::Stopped);
}
