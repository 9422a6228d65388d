#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace magsq;
using Catch::Approx;
using constants::angular;

TEST_CASE("dB conversion") {
    CHECK(squeezing_db(0.5) == 0.0);
    CHECK(squeezing_db(0.05) == Approx(10.0));
    CHECK(squeezing_db(5.0) == Approx(-10.0));
    CHECK_THROWS_AS(squeezing_db(0.0), InvalidParameter);
    CHECK(squeezing_parameter_from_db(8.69) == Approx(1.0).epsilon(1e-3));
    CHECK(squeezing_parameter_from_db(3.87) == Approx(0.4455).epsilon(1e-3));
    for (double r : {0.1, 0.7, 2.0}) CHECK(squeezing_parameter_from_db(squeezing_db(0.5 * std::exp(-2 * r))) == Approx(r));
}

TEST_CASE("resonant Lyapunov solution matches the closed form on a grid") {
    for (double r : {0.0, 0.3, 1.0, 2.0})
        for (double th : {0.0, 0.9, constants::pi})
            for (double temp : {0.0, 0.2, 2.0}) {
                const auto s = fixture::magnon_params(20e6, temp);
                const double nm = temp > 0 ? oracle::bose(s.magnon_freq, temp) : 0.0;
                const auto exact = resonant_variances_analytic(s.kappa_a, s.kappa_m, s.g_ma, r, th, nm);
                const auto v = detuned_variances(s, {r, th, 0.0}, 0.0, 0.0);
                CHECK(v.cavity_y == Approx(exact.cavity_y).epsilon(1e-10));
                CHECK(v.magnon_x == Approx(exact.magnon_x).epsilon(1e-10));
            }
}

TEST_CASE("decoupled cavity carries the drive squeezing, magnon stays at vacuum") {
    const auto s = fixture::magnon_params(0.0, 20e-3);
    const auto v = detuned_variances(s, {1.0, 0.0, 0.0}, 0.0, 0.0);
    CHECK(v.cavity_y == Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));
    CHECK(v.cavity_x == Approx(0.5 * std::exp(2.0)).epsilon(1e-12));
    CHECK(squeezing_db(v.cavity_y) == Approx(8.69).margin(0.01));
    CHECK(v.magnon_x == Approx(0.5).margin(1e-10));
    CHECK(v.magnon_y == Approx(0.5).margin(1e-10));
}

TEST_CASE("strong-coupling limit approaches the simple formula") {
    const double ka = 1.0, km = 0.01, g = 100.0;
    const auto exact = resonant_variances_analytic(ka, km, g, 1.0, 0.0, 0.0);
    CHECK(exact.magnon_x == Approx(optimal_magnon_variance(1.0, ka, km)).epsilon(0.02));
    CHECK(exact.cavity_y == Approx(exact.magnon_x).epsilon(0.02));
}

TEST_CASE("squeezing is lost away from resonance and for the wrong phase") {
    const auto s = fixture::magnon_params();
    const double best = detuned_variances(s, {2.0, 0.0, 0.0}, 0.0, 0.0).magnon_x;
    for (double d : {-8e6, -3e6, 3e6, 8e6}) {
        CHECK(detuned_variances(s, {2.0, 0.0, 0.0}, angular(d), 0.0).magnon_x > best);
        CHECK(detuned_variances(s, {2.0, 0.0, 0.0}, 0.0, angular(d)).magnon_x > best);
    }
    CHECK(detuned_variances(s, {2.0, constants::pi, 0.0}, 0.0, 0.0).magnon_x > 0.5);
}

TEST_CASE("every detuned covariance is physical") {
    const auto s = fixture::magnon_params(20e6, 0.1);
    for (double da = -10e6; da <= 10e6; da += 2.5e6)
        for (double dm = -10e6; dm <= 10e6; dm += 2.5e6)
            for (double r : {0.0, 1.0, 2.0}) {
                const auto v = detuned_variances(s, {r, 0.4, 0.0}, angular(da), angular(dm));
                CHECK(v.covariance.symmetric());
                CHECK(v.covariance.positive_definite());
                CHECK(v.covariance.satisfies_uncertainty());
                CHECK(v.covariance.mode_determinant(0) >= 0.25 - 1e-12);
                CHECK(v.covariance.mode_determinant(1) >= 0.25 - 1e-12);
            }
}
