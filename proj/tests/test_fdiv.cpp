#include <catch2/catch_amalgamated.hpp>

#include "baudrx/fdiv.hpp"

#include <cmath>
#include <vector>

using namespace baudrx;

TEST_CASE("dsm: zero fraction never carries") {
    double accum = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto o = dsm_step(0.0, accum);
        REQUIRE(o.carry == 0);
        REQUIRE(o.residue == 0.0);
    }
}

TEST_CASE("dsm: frac 0.25 carries every fourth cycle with cycling residues") {
    double accum = 0.0;
    const int carries_expect[4] = {0, 0, 0, 1};
    const double residues_expect[4] = {0.25, 0.5, 0.75, 0.0};
    for (int i = 0; i < 32; ++i) {
        const auto o = dsm_step(0.25, accum);
        REQUIRE(o.carry == carries_expect[i % 4]);
        REQUIRE(o.residue == Catch::Approx(residues_expect[i % 4]).margin(1e-12));
    }
}

TEST_CASE("dsm: frac 0.04 yields exactly 400 carries in 1e4 cycles") {
    double accum = 0.0;
    long carries = 0;
    for (int i = 0; i < 10000; ++i)
        carries += dsm_step(0.04, accum).carry;
    REQUIRE(carries == 400);
}

TEST_CASE("dsm: long-run carry density matches frac to 1e-9 relative frequency") {
    for (double frac : {0.04, 0.123456789, 0.5, 0.9999, 1.0 / 3.0}) {
        double accum = 0.0;
        long carries = 0;
        const long n = 10000000;
        for (long i = 0; i < n; ++i)
            carries += dsm_step(frac, accum).carry;
        const double mean = static_cast<double>(carries) / static_cast<double>(n);
        // bounded accumulator: |mean - frac| <= 1/n, i.e. <1e-9 relative on the
        // division ratio for a 16.x divider
        REQUIRE(std::abs(mean - frac) <= 1.0 / static_cast<double>(n) + 1e-12);
    }
}

TEST_CASE("mmd division and range") {
    REQUIRE(mmd_divide(16, 62.5e-12) == Catch::Approx(1e-9));
    REQUIRE(mmd_divide(17, 62.5e-12) == Catch::Approx(1.0625e-9));
    REQUIRE_THROWS_AS(mmd_divide(7, 62.5e-12), std::out_of_range);
    REQUIRE_THROWS_AS(mmd_divide(33, 62.5e-12), std::out_of_range);
}

TEST_CASE("dcdl code generation: zero residue, midscale, and range clamp") {
    const double t_lc = 62.5e-12;
    const double k = t_lc / 512.0;
    bool flag = false;
    REQUIRE(dcdl_code(0.0, k, t_lc, &flag) == 0);
    REQUIRE(dcdl_code(0.5, k, t_lc, &flag) == 256);
    REQUIRE_FALSE(flag);
    // a gain estimate far too small asks for codes beyond 9 bits
    REQUIRE(dcdl_code(0.9, k * 0.5, t_lc, &flag) == 511);
    REQUIRE(flag);
    DcdlPlant plant;
    plant.k_true = k;
    plant.inl_peak_lsb = 0.0;
    REQUIRE(plant.delay(256) == Catch::Approx(t_lc / 2.0));
    REQUIRE(plant.delay(0) == 0.0);
}

TEST_CASE("dcdl INL bow peaks midscale at the configured LSB fraction") {
    DcdlPlant plant;
    plant.inl_peak_lsb = 0.73;
    double worst = 0.0;
    for (int c = 0; c <= 511; ++c)
        worst = std::max(worst, std::abs(plant.delay(c) - plant.k_true * c));
    REQUIRE(worst == Catch::Approx(0.73 * plant.k_true).epsilon(0.01));
}

TEST_CASE("bbpd vote and tie rule") {
    REQUIRE(bbpd_vote(1.0e-9, 1.1e-9) == BbVote::Early);
    REQUIRE(bbpd_vote(1.1e-9, 1.0e-9) == BbVote::Late);
    REQUIRE(bbpd_vote(1.0e-9, 1.0e-9) == BbVote::Early);
}

TEST_CASE("perfect gain and zero INL give uniform output edges") {
    FdivConfig cfg;
    cfg.plant.inl_peak_lsb = 0.0;
    cfg.k_dcdl_init = cfg.plant.k_true;
    cfg.mu = 0.0;
    FdivState s;
    s.reset(cfg, 0.37);
    std::vector<double> times;
    for (int i = 0; i < 4096; ++i)
        times.push_back(fdiv_step(s, cfg).time);
    const double t_ideal = (cfg.div_int + 0.37) * cfg.t_lc;
    double dev_min = 1e9, dev_max = -1e9;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double dev = times[i] - static_cast<double>(i + 1) * t_ideal;
        dev_min = std::min(dev_min, dev);
        dev_max = std::max(dev_max, dev);
    }
    REQUIRE(dev_max - dev_min < 1e-12); // quantization fully cancelled
}

TEST_CASE("long-run mean FDIV frequency is exact for any fraction") {
    FdivConfig cfg;
    cfg.k_dcdl_init = cfg.plant.k_true;
    FdivState s;
    for (double frac : {0.04, 0.77, 0.3333333}) {
        s.reset(cfg, frac);
        double t_last = 0.0;
        const int n = 200000;
        for (int i = 0; i < n; ++i)
            t_last = fdiv_step(s, cfg).time;
        const double mean_period = t_last / n;
        const double ideal = (cfg.div_int + frac) * cfg.t_lc;
        REQUIRE(std::abs(mean_period / ideal - 1.0) < 1e-9);
    }
}

TEST_CASE("kdcdl: no update while dcw is constant") {
    bool flag = false;
    const double k = 1e-13;
    REQUIRE(kdcdl_calibrate(k, +1, 100, 100, 1e-16, 1e-15, &flag) == k);
    REQUIRE(kdcdl_calibrate(k, -1, 100, 100, 1e-16, 1e-15, &flag) == k);
}

TEST_CASE("kdcdl floor clamp flags") {
    bool flag = false;
    const double k = kdcdl_calibrate(1e-15, +1, 10, 5, 1e-15, 1e-15, &flag);
    REQUIRE(k == 1e-15);
    REQUIRE(flag);
}

TEST_CASE("gain calibration converges from +/-10 percent error at frac 0.04") {
    for (double err0 : {+0.10, -0.10}) {
        FdivConfig cfg;
        cfg.k_dcdl_init = cfg.plant.k_true * (1.0 + err0);
        cfg.mu = cfg.plant.k_true * 1e-5;
        FdivState s;
        s.reset(cfg, 0.04);
        for (int i = 0; i < 600000; ++i)
            fdiv_step(s, cfg);
        const double rel = s.k_dcdl / cfg.plant.k_true - 1.0;
        INFO("start " << err0 << " end " << rel);
        REQUIRE(std::abs(rel) < 0.01);
    }
}

TEST_CASE("kdcdl at the true gain dithers without drifting") {
    FdivConfig cfg;
    cfg.k_dcdl_init = cfg.plant.k_true;
    cfg.mu = cfg.plant.k_true * 1e-5;
    FdivState s;
    s.reset(cfg, 0.04);
    for (int i = 0; i < 200000; ++i)
        fdiv_step(s, cfg);
    REQUIRE(std::abs(s.k_dcdl / cfg.plant.k_true - 1.0) < 0.005);
}

TEST_CASE("calibration depends only on edge differences, not absolute time") {
    FdivConfig cfg;
    cfg.k_dcdl_init = cfg.plant.k_true * 1.05;
    cfg.mu = cfg.plant.k_true * 1e-5;
    FdivState a, b;
    a.reset(cfg, 0.04);
    b.reset(cfg, 0.04);
    b.mmd_time = 123.456e-9; // global offset of every edge
    b.out_edge = b.mmd_time;
    b.out_edge_prev = b.mmd_time;
    for (int i = 0; i < 50000; ++i) {
        fdiv_step(a, cfg);
        fdiv_step(b, cfg);
    }
    REQUIRE(a.k_dcdl == Catch::Approx(b.k_dcdl).margin(1e-22));
    REQUIRE(a.dcw == b.dcw);
}

TEST_CASE("frac_ctrl outside [0,1) borrows into the modulus") {
    FdivConfig cfg;
    cfg.k_dcdl_init = cfg.plant.k_true;
    FdivState s;
    s.reset(cfg, 1.25); // ratio 17.25
    double t_last = 0.0;
    const int n = 10000;
    for (int i = 0; i < n; ++i)
        t_last = fdiv_step(s, cfg).time;
    REQUIRE(t_last / n == Catch::Approx((cfg.div_int + 1.25) * cfg.t_lc).epsilon(1e-9));
}

TEST_CASE("tiny negative frac_ctrl borrows cleanly (no 1.0 rounding trap)") {
    FdivConfig cfg;
    cfg.k_dcdl_init = cfg.plant.k_true;
    FdivState s;
    s.reset(cfg, -1e-18);
    REQUIRE_NOTHROW(fdiv_step(s, cfg));
    s.reset(cfg, -1e-5); // ratio just under 16
    double t = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i)
        t = fdiv_step(s, cfg).time;
    // bounded-accumulator window error is 1/n periods
    REQUIRE(t / n ==
            Catch::Approx((16.0 - 1e-5) * cfg.t_lc).epsilon(2.0 / (16.0 * n)));
}
