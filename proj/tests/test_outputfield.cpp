#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace magsq;
using Catch::Approx;
using constants::angular;

namespace {

double coeff_diff(const OutputCoefficients& a, const OutputCoefficients& b) {
    return std::max({std::abs(a.a - b.a), std::abs(a.b - b.b), std::abs(a.c - b.c), std::abs(a.d - b.d)});
}

std::vector<double> omega_grid(double span_hz, int n) {
    std::vector<double> g;
    for (int k = 0; k < n; ++k) g.push_back(angular(-span_hz + 2.0 * span_hz * k / (n - 1)));
    return g;
}

} // namespace

TEST_CASE("closed-form output coefficients match the input-output construction") {
    for (double g : {0.0, 10e6, 20e6})
        for (double da : {0.0, 2e6, -5e6})
            for (double dm : {0.0, 1e6})
                for (double phi : {0.0, 0.7, constants::pi / 2}) {
                    const auto s = fixture::magnon_params(g);
                    const auto sys = build_two_mode(s, {1.0, 0.0, 0.0}, angular(da), angular(dm));
                    for (double f : {-30e6, -4e6, 0.0, 3.3e6, 25e6}) {
                        const double w = angular(f);
                        const auto closed = output_coefficients(s, angular(da), angular(dm), w, phi);
                        const auto generic = output_coefficients_generic(sys, s.kappa_a, w, phi);
                        CHECK(coeff_diff(closed, generic) < 1e-10);
                    }
                }
}

TEST_CASE("output coefficients preserve the commutator") {
    // |A|^2 + |C|^2 = |B|^2 + |D|^2 = 1/2 at every frequency.
    const auto s = fixture::magnon_params(17e6);
    for (double f : {-50e6, -20e6, -1e6, 0.0, 5e6, 40e6})
        for (double phi : {0.0, 1.0, 2.5}) {
            const auto c = output_coefficients(s, angular(2e6), angular(-1e6), angular(f), phi);
            const double ac = std::norm(c.a) + std::norm(c.c);
            const double bd = std::norm(c.b) + std::norm(c.d);
            CHECK(ac == Approx(0.5).epsilon(1e-12));
            CHECK(bd == Approx(0.5).epsilon(1e-12));
            CHECK(ac - bd == Approx(0.0).margin(1e-12));
        }
}

TEST_CASE("output spectrum matches the explicit sum") {
    const auto s = fixture::magnon_params(20e6, 0.3);
    const SqueezedDrive drive{0.8, 0.4, 0.0};
    const auto bath = squeezed_noise_moments(drive);
    const double nm = oracle::bose(s.magnon_freq, s.temperature);
    const auto grid = omega_grid(40e6, 41);
    const auto trace = output_spectrum(s, drive, 0.0, 0.0, grid, 1.1);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto c = output_coefficients(s, 0.0, 0.0, grid[k], 1.1);
        const auto cm = output_coefficients(s, 0.0, 0.0, -grid[k], 1.1);
        const double ref = (bath.n + 0.5) * (std::norm(c.a) + std::norm(c.b)) + 2.0 * (bath.m * c.a * cm.a).real() +
                           (nm + 0.5) * (std::norm(c.c) + std::norm(c.d));
        // M* B(w) B(-w) term of the lowering pairing equals the conjugate of the above.
        CHECK(trace.values[k] == Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("decoupled cavity: flat squeezed spectrum") {
    const auto s = fixture::magnon_params(0.0);
    for (double r : {0.3, 1.0, 1.7}) {
        const auto trace = output_spectrum(s, {r, 0.0, 0.0}, 0.0, 0.0, omega_grid(40e6, 81), constants::pi / 2);
        const auto mid = trace.values[40];
        CHECK(trace.omega[40] == 0.0);
        CHECK(mid == Approx(0.5 * std::exp(-2 * r)).margin(1e-6));
        CHECK(find_spectrum_features(trace).empty());
    }
}

TEST_CASE("vacuum input gives the vacuum level everywhere") {
    const auto s = fixture::magnon_params(20e6, 0.0);
    const auto trace = output_spectrum(s, {0.0, 0.0, 0.0}, 0.0, 0.0, omega_grid(40e6, 161), 0.3);
    for (double v : trace.values) CHECK(v == Approx(0.5).epsilon(1e-12));
    CHECK(find_spectrum_features(trace).empty());
}

TEST_CASE("strong coupling splits the spectrum at +-g_ma") {
    for (double g_over_ka : {2.0, 4.0}) {
        const auto s = fixture::magnon_params(g_over_ka * 5e6);
        const auto trace = output_spectrum(s, {1.0, 0.0, 0.0}, 0.0, 0.0, omega_grid(40e6, 801), constants::pi / 2);
        const auto features = find_spectrum_features(trace);
        REQUIRE(features.size() == 3);
        CHECK(features[1] == Approx(0.0).margin(1e-6 * s.g_ma));
        CHECK(std::abs(features[0] + s.g_ma) < s.kappa_a);
        CHECK(std::abs(features[2] - s.g_ma) < s.kappa_a);
        CHECK(features[0] == Approx(-features[2]).epsilon(1e-9));
    }
}

TEST_CASE("spectra are non-negative") {
    for (double temp : {0.0, 0.5})
        for (double phi : {0.0, 0.8, constants::pi / 2})
            for (double da : {0.0, 7e6}) {
                const auto s = fixture::magnon_params(20e6, temp);
                const auto trace = output_spectrum(s, {1.5, 0.2, 0.0}, angular(da), 0.0, omega_grid(60e6, 241), phi);
                for (double v : trace.values) CHECK(v >= 0.0);
            }
}

TEST_CASE("feature finder refines a sampled parabola exactly") {
    SpectrumTrace t;
    for (int k = 0; k < 21; ++k) {
        const double w = -1.0 + 0.1 * k;
        t.omega.push_back(w);
        t.values.push_back(2.0 + 3.0 * (w - 0.0371) * (w - 0.0371));
    }
    const auto f = find_spectrum_features(t);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == Approx(0.0371).epsilon(1e-12));
    SpectrumTrace tiny;
    tiny.omega = {0.0, 1.0};
    tiny.values = {1.0, 2.0};
    CHECK(find_spectrum_features(tiny).empty());
}
