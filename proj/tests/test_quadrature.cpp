#include <catch_amalgamated.hpp>

#include <array>
#include <cmath>
#include <vector>

#include "magsq/quadrature.hpp"

using namespace magsq;
using Catch::Approx;

TEST_CASE("Gauss-Kronrod panel is exact for polynomials") {
    auto f = [](double x) { return std::array<double, 3>{1.0, x * x, std::pow(x, 9)}; };
    const std::vector<double> br{-1.0, 2.0};
    const auto r = integrate_adaptive<3>(f, br);
    CHECK(r.converged);
    CHECK(r.value[0] == Approx(3.0).epsilon(1e-15));
    CHECK(r.value[1] == Approx(3.0).epsilon(1e-14));
    CHECK(r.value[2] == Approx((1024.0 - 1.0) / 10.0).epsilon(1e-13));
    CHECK(r.evaluations == 15);
}

TEST_CASE("narrow Lorentzians are resolved with peak break points") {
    const double eps = 1e-6, c1 = 0.3, c2 = -2.0, l = 50.0;
    auto f = [&](double x) {
        return std::array<double, 2>{1.0 / ((x - c1) * (x - c1) + eps * eps),
                                     1.0 / ((x - c2) * (x - c2) + 1e4 * eps * eps)};
    };
    auto exact = [&](double c, double w) { return (std::atan((l - c) / w) + std::atan((l + c) / w)) / w; };
    const std::vector<double> centres{c1, c2}, widths{eps, 100 * eps};
    const auto br = peak_breakpoints(-l, l, centres, widths);
    CHECK(std::is_sorted(br.begin(), br.end()));
    CHECK(br.front() == -l);
    CHECK(br.back() == l);
    QuadratureOptions opt;
    opt.rel_tol = 1e-12;
    const auto r = integrate_adaptive<2>(f, br, opt);
    CHECK(r.converged);
    CHECK(r.value[0] == Approx(exact(c1, eps)).epsilon(1e-10));
    CHECK(r.value[1] == Approx(exact(c2, 100 * eps)).epsilon(1e-10));
}

TEST_CASE("quadrature reports non-convergence instead of a silent answer") {
    auto f = [](double x) { return std::array<double, 1>{1.0 / std::sqrt(std::abs(x - 0.1234567))}; };
    const std::vector<double> br{-1.0, 1.0};
    QuadratureOptions opt;
    opt.rel_tol = 1e-14;
    opt.max_intervals = 20;
    const auto r = integrate_adaptive<1>(f, br, opt);
    CHECK_FALSE(r.converged);
    CHECK(r.intervals <= 21);
}

TEST_CASE("quadrature argument checks") {
    auto f = [](double) { return std::array<double, 1>{1.0}; };
    const std::vector<double> one{0.0};
    CHECK_THROWS_AS(integrate_adaptive<1>(f, one), InvalidParameter);
    const std::vector<double> flat{1.0, 1.0};
    CHECK_THROWS_AS(integrate_adaptive<1>(f, flat), InvalidParameter);
}
