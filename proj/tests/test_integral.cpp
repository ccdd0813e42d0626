#include <catch2/catch_amalgamated.hpp>

#include "baudrx/integral.hpp"

using namespace baudrx;

TEST_CASE("all-zero votes leave frac_ctrl unchanged") {
    IntegralConfig cfg;
    IntegralPathState s;
    const double f0 = s.accumulate(0.0, 0.25, cfg);
    REQUIRE(f0 == 0.25);
    for (int i = 0; i < 100; ++i)
        REQUIRE(s.accumulate(0.0, 0.25, cfg) == 0.25);
    REQUIRE_FALSE(s.clamped);
}

TEST_CASE("constant net vote ramps frac_ctrl linearly at ki per batch") {
    IntegralConfig cfg;
    cfg.ki = 1e-5;
    IntegralPathState s;
    double last = 0.0;
    for (int b = 1; b <= 1000; ++b) {
        last = s.accumulate(1.0, 0.0, cfg);
        REQUIRE(last == Catch::Approx(cfg.ki * b).margin(1e-15));
    }
}

TEST_CASE("clamp hits flag loss of lock") {
    IntegralConfig cfg;
    cfg.ki = 0.01;
    cfg.clamp = 0.05;
    IntegralPathState s;
    for (int b = 0; b < 100; ++b)
        s.accumulate(10.0, 0.0, cfg);
    REQUIRE(s.freq_accum == Catch::Approx(cfg.clamp));
    REQUIRE(s.clamped);
    // and symmetric on the negative side
    IntegralPathState t;
    for (int b = 0; b < 100; ++b)
        t.accumulate(-10.0, 0.0, cfg);
    REQUIRE(t.freq_accum == Catch::Approx(-cfg.clamp));
    REQUIRE(t.clamped);
}

TEST_CASE("disabled path passes the nominal fraction through") {
    IntegralConfig cfg;
    cfg.enabled = false;
    IntegralPathState s;
    for (int b = 0; b < 10; ++b)
        REQUIRE(s.accumulate(5.0, 0.04, cfg) == 0.04);
    REQUIRE(s.freq_accum == 0.0);
}
