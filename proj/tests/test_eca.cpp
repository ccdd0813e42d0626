#include <catch2/catch_amalgamated.hpp>

#include "baudrx/eca.hpp"

using namespace baudrx;

namespace {

// drive one full off/on dither cycle with per-half pdlev code streams
void run_cycle(EcaState& s, const EcaConfig& cfg, int pdlev_off_half, int pdlev_on_half) {
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(pdlev_off_half, cfg);
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(pdlev_on_half, cfg);
}

} // namespace

TEST_CASE("delay cap toggles every dither period") {
    EcaConfig cfg;
    cfg.dither_period = 64;
    EcaState s;
    REQUIRE(s.extra_delay(cfg) == 0.0);
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(10, cfg);
    REQUIRE(s.dither_on);
    REQUIRE(s.extra_delay(cfg) == Catch::Approx(cfg.delta_ui));
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(10, cfg);
    REQUIRE_FALSE(s.dither_on);
}

TEST_CASE("pdlev increasing when delayed decreases k (lock shifts rightward)") {
    EcaConfig cfg;
    cfg.dither_period = 128;
    EcaState s;
    const double k0 = s.k_ratio;
    run_cycle(s, cfg, 20, 30); // delayed half sees larger Pdlev
    REQUIRE(s.k_ratio == Catch::Approx(k0 - cfg.k_step));
    run_cycle(s, cfg, 30, 20); // and the opposite slope raises k
    REQUIRE(s.k_ratio == Catch::Approx(k0));
}

TEST_CASE("equal snapshots within the deadband leave k untouched") {
    EcaConfig cfg;
    cfg.dither_period = 128;
    cfg.deadband = 0.5;
    EcaState s;
    const double k0 = s.k_ratio;
    run_cycle(s, cfg, 20, 20);
    REQUIRE(s.k_ratio == k0);
    // differences inside the deadband are also ignored
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(20, cfg);
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(i % 4 == 0 ? 21 : 20, cfg); // mean 20.25
    REQUIRE(s.k_ratio == k0);
}

TEST_CASE("snapshots come from the second half of each dither phase only") {
    EcaConfig cfg;
    cfg.dither_period = 128;
    EcaState s;
    const double k0 = s.k_ratio;
    // first half of each phase carries a bogus value; second halves are equal
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(i < 64 ? 63 : 20, cfg);
    for (int i = 0; i < cfg.dither_period; ++i)
        s.tick(i < 64 ? 0 : 20, cfg);
    REQUIRE(s.k_ratio == k0); // settled halves match, so no adjustment
    REQUIRE(s.pdlev_snapshot_off == Catch::Approx(20.0));
    REQUIRE(s.pdlev_snapshot_on == Catch::Approx(20.0));
}

TEST_CASE("k stays clamped to its configured range") {
    EcaConfig cfg;
    cfg.dither_period = 16;
    cfg.k_min = 0.5;
    cfg.k_max = 2.0;
    EcaState s;
    for (int c = 0; c < 100; ++c)
        run_cycle(s, cfg, 10, 30); // keep pushing k down
    REQUIRE(s.k_ratio == Catch::Approx(cfg.k_min));
    for (int c = 0; c < 200; ++c)
        run_cycle(s, cfg, 30, 10);
    REQUIRE(s.k_ratio == Catch::Approx(cfg.k_max));
}

TEST_CASE("disabled ECA never moves or dithers") {
    EcaConfig cfg;
    cfg.enabled = false;
    cfg.dither_period = 16;
    EcaState s;
    for (int i = 0; i < 1000; ++i) {
        s.tick(i % 64, cfg);
        REQUIRE(s.extra_delay(cfg) == 0.0);
    }
    REQUIRE(s.k_ratio == 1.0);
}
