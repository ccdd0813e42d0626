#include <catch2/catch_amalgamated.hpp>

#include "baudrx/ilcm.hpp"

#include <cmath>

using namespace baudrx;

TEST_CASE("beta=1 with no frequency error tracks the reference exactly") {
    IlcmState s;
    s.realign_beta = 1.0;
    for (int i = 0; i < 100; ++i) {
        const double ref = 0.1 * std::sin(0.37 * i);
        ilcm_step(s, ref);
        REQUIRE(s.osc_phase == Catch::Approx(ref).margin(1e-15));
    }
}

TEST_CASE("beta=0.5 halves the phase error at every injection") {
    IlcmState s;
    s.realign_beta = 0.5;
    s.osc_phase = 1.0; // initial error vs a zero reference
    double expect = 1.0;
    for (int i = 0; i < 20; ++i) {
        ilcm_step(s, 0.0);
        expect *= 0.5;
        REQUIRE(s.osc_phase == Catch::Approx(expect).margin(1e-15));
    }
}

TEST_CASE("input phase ramp leaves the closed-form steady-state error") {
    // e[n+1] = (1-beta)(e[n] + delta)  =>  e* = delta (1-beta)/beta
    const double beta = 0.25;
    const double delta = 0.01; // UI per injection
    IlcmState s;
    s.realign_beta = beta;
    double err = 0.0;
    for (int i = 1; i < 4000; ++i) {
        const double ref = delta * i;
        ilcm_step(s, ref);
        err = ref - s.osc_phase;
    }
    REQUIRE(err == Catch::Approx(delta * (1.0 - beta) / beta).epsilon(1e-9));
}

TEST_CASE("integral trim drives the tracked frequency toward the input rate") {
    const double beta = 0.25;
    const double delta = 0.01;
    IlcmState s;
    s.realign_beta = beta;
    s.trim_gain = 1e-4;
    double err = 0.0;
    for (int i = 1; i < 20000; ++i) {
        const double ref = delta * i;
        ilcm_step(s, ref);
        err = ref - s.osc_phase;
    }
    // the rate accumulator absorbs the ramp, so the residual error collapses
    REQUIRE(std::abs(err) < 0.2 * delta * (1.0 - beta) / beta);
    REQUIRE(s.freq_track_accum == Catch::Approx(delta).epsilon(0.05));
}

TEST_CASE("invalid beta is rejected") {
    IlcmState s;
    s.realign_beta = 0.0;
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);
    s.realign_beta = 1.5;
    REQUIRE_THROWS_AS(s.validate(), std::invalid_argument);
}
