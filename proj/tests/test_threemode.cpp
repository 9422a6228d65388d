#include <catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"

using namespace magsq;
using Catch::Approx;
using constants::angular;

TEST_CASE("frequency-domain harmonics match the shifted Lyapunov oracle") {
    for (double r : {0.5, 1.0})
        for (double temp : {10e-3, 100e-3}) {
            const auto sys = fixture::phonon_system(r, temp);
            const auto h = frequency_domain_mechanics(sys);
            const auto ref = oracle::mechanical_cycle(sys);
            const double scale = ref.v0.cwiseAbs().maxCoeff();
            CHECK((h.stationary - ref.v0).cwiseAbs().maxCoeff() < 1e-7 * scale);
            CHECK((h.oscillating - ref.vplus).cwiseAbs().maxCoeff() < 1e-7 * scale);
        }
}

TEST_CASE("interaction-picture variance: cycle maximum and weighted mean") {
    const auto sys = fixture::phonon_system(1.0);
    const auto res = interaction_picture_variance(sys);
    const double wb = sys.model.drift(q, p);
    const auto ref = oracle::mechanical_cycle(sys);
    CHECK(res.var_q_tilde == Approx(oracle::rotated_q_max(ref, wb, wb)).epsilon(1e-6));
    // Weighted A/B integral equals the direct cycle average of q~.
    CHECK(res.var_q_mean == Approx(res.cycle.mean_q).epsilon(1e-6));
    CHECK(res.var_p_mean == Approx(res.cycle.mean_p).epsilon(1e-6));
    CHECK(res.var_q_min <= res.var_q_mean);
    CHECK(res.var_q_mean <= res.var_q_tilde);
    CHECK(res.cycle.min_uncertainty >= 0.25 - 1e-9);
    CHECK(res.diagnostics.tail_fraction < 1e-4);
}

TEST_CASE("interaction picture needs the squeezed drive on the anti-Stokes sideband") {
    const auto s = fixture::phonon_params();
    const auto wp = fixture::phonon_working_point(s);
    const auto sys = build_three_mode(s, {1.0, 0.0, 0.9 * s.mech_freq}, wp);
    CHECK_THROWS_AS(interaction_picture_variance(sys), InvalidParameter);
}

TEST_CASE("vacuum drive: frequency domain equals Lyapunov") {
    const auto sys = fixture::phonon_system(0.0);
    REQUIRE_FALSE(sys.diffusion.time_dependent());
    const auto lyap = lyapunov_steady_state(sys.model, sys.diffusion);
    const auto h = frequency_domain_mechanics(sys);
    CHECK(h.stationary(0, 0) == Approx(lyap.v(q, q)).epsilon(1e-6));
    CHECK(h.stationary(1, 1) == Approx(lyap.v(p, p)).epsilon(1e-6));
    CHECK(h.stationary(0, 1) == Approx(lyap.v(q, p)).margin(1e-6 * lyap.v(q, q)));
    CHECK(h.oscillating.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("no magnomechanical coupling leaves a thermal oscillator") {
    const auto sys = fixture::phonon_system(1.0, 10e-3, 0.0);
    const double nb = oracle::bose(angular(10e6), 10e-3);
    const auto res = interaction_picture_variance(sys);
    CHECK(res.var_q_tilde == Approx(nb + 0.5).epsilon(0.01));
    CHECK(res.var_p_tilde == Approx(nb + 0.5).epsilon(0.01));
}

TEST_CASE("time-domain limit cycle agrees with the frequency domain") {
    const auto sys = fixture::phonon_system(1.0);
    const auto fd = interaction_picture_variance(sys);
    const auto td = limit_cycle_variance_oracle(sys);
    CHECK(td.var_q_max == Approx(fd.var_q_tilde).epsilon(1e-4));
    CHECK(td.var_q_mean == Approx(fd.var_q_mean).epsilon(1e-4));
    CHECK(td.var_q_min == Approx(fd.var_q_min).epsilon(1e-4));
    CHECK(td.periodicity_residual < 1e-7);
    CHECK(td.min_uncertainty >= 0.25 - 1e-9);
    // The rotated variance is not constant over the cycle.
    CHECK(td.flatness == Approx(fd.cycle.flatness_q()).epsilon(1e-3));
}

TEST_CASE("direct period stepping reaches the same limit cycle") {
    // Strong damping keeps the transient short.
    const auto sys = fixture::phonon_system(0.7, 10e-3, 3e6);
    LimitCycleOptions opt;
    opt.method = LimitCycleMethod::direct;
    const auto direct = limit_cycle_variance_oracle(sys, opt);
    const auto shoot = limit_cycle_variance_oracle(sys);
    CHECK(direct.var_q_max == Approx(shoot.var_q_max).epsilon(1e-6));
    CHECK(direct.periods > 1);
}

TEST_CASE("position spectrum is non-negative") {
    const auto sys = fixture::phonon_system(1.0, 50e-3);
    std::vector<double> grid;
    for (double f = -40e6; f <= 40e6; f += 0.25e6) grid.push_back(angular(f));
    const auto spec = mechanical_spectrum(sys, grid);
    for (double a : spec.stationary) CHECK(a >= 0.0);
}

TEST_CASE("response rows reproduce the transfer matrix times the coupling") {
    const auto sys = fixture::phonon_system(1.0);
    const double w = angular(7e6);
    const auto rows = response_rows(sys.model, w);
    const auto row_q = quadrature_noise_rows(sys.model, w, q);
    for (int k = 0; k < noise_channels; ++k) CHECK(std::abs(rows(q, k) - row_q[static_cast<std::size_t>(k)]) == 0.0);
    CHECK(partner_frequency(w, Harmonic::raising, 3.0) == Approx(-w + 6.0));
    CHECK(partner_frequency(w, Harmonic::lowering, 3.0) == Approx(-w - 6.0));
}
