#include <catch2/catch_amalgamated.hpp>

#include "baudrx/metrics/vem.hpp"
#include "baudrx/sim/experiments.hpp"
#include "baudrx/sim/run.hpp"

#include <cmath>

using namespace baudrx;

namespace {

ScenarioConfig base_config() {
    ScenarioConfig cfg;
    cfg.channel_cursors = {0.12, 1.0, 0.3, 0.06};
    cfg.channel_precursors = 1;
    cfg.run_n_ui = 300000;
    cfg.run_warmup_ui = 150000;
    cfg.eca_enabled = false;
    cfg.fdiv_tracking_on = false;
    return cfg;
}

double wrap_half(double x) {
    x = std::fmod(x, 1.0);
    if (x > 0.5)
        x -= 1.0;
    if (x < -0.5)
        x += 1.0;
    return x;
}

} // namespace

TEST_CASE("noiseless ideal-PI lock lands on the h1=h(-1) crossing") {
    const ScenarioConfig cfg = base_config();
    const auto r = run_scenario(cfg);
    const auto sbr = cfg.make_sbr();
    const double cross = mm_crossing_phase(sbr, 0.0, -0.45, 0.45);
    REQUIRE(std::abs(wrap_half(r.lane[0].lock_phase_ui - cross)) < 0.02);
    REQUIRE(r.lane[0].ber == 0.0);
    REQUIRE_FALSE(r.loss_of_lock);
}

TEST_CASE("identical config and seed give byte-identical reports") {
    ScenarioConfig cfg = base_config();
    cfg.afe_noise_sigma = 0.02;
    cfg.jitter_rj_sigma_ui = 0.002;
    cfg.run_n_ui = 120000;
    cfg.run_warmup_ui = 60000;
    const auto a = run_scenario(cfg);
    const auto b = run_scenario(cfg);
    REQUIRE(a.to_json_text() == b.to_json_text());
    REQUIRE(a.to_kv_text() == b.to_kv_text());
}

TEST_CASE("different seeds change noisy runs") {
    ScenarioConfig cfg = base_config();
    cfg.afe_noise_sigma = 0.05;
    cfg.run_n_ui = 120000;
    cfg.run_warmup_ui = 60000;
    auto a = run_scenario(cfg);
    cfg.run_seed = 12345;
    auto b = run_scenario(cfg);
    REQUIRE(a.to_json_text() != b.to_json_text());
}

TEST_CASE("lane results do not depend on how many other lanes run") {
    ScenarioConfig cfg = base_config();
    cfg.afe_noise_sigma = 0.02;
    cfg.fdiv_tracking_on = false; // no inter-lane coupling
    cfg.run_n_ui = 120000;
    cfg.run_warmup_ui = 60000;
    cfg.run_lanes = 1;
    const auto r1 = run_scenario(cfg);
    cfg.run_lanes = 4;
    const auto r4 = run_scenario(cfg);
    REQUIRE(r1.lane[0].lock_phase_ui == r4.lane[0].lock_phase_ui);
    REQUIRE(r1.lane[0].dlev_code == r4.lane[0].dlev_code);
    REQUIRE(r1.lane[0].errors == r4.lane[0].errors);
}

TEST_CASE("sweep validates the path before running and seeds points apart") {
    ScenarioConfig cfg = base_config();
    cfg.run_n_ui = 60000;
    cfg.run_warmup_ui = 30000;
    REQUIRE_THROWS_AS(sweep(cfg, "clock.never_was", {"1"}), ConfigError);
    REQUIRE_THROWS_AS(sweep(cfg, "clock.ppm_offset", {}), ConfigError);
    const auto reports = sweep(cfg, "clock.ppm_offset", {"0", "1000", "2500"});
    REQUIRE(reports.size() == 3);
    REQUIRE(reports[0].seed + 1 == reports[1].seed);
    REQUIRE(reports[1].seed + 1 == reports[2].seed);
}

TEST_CASE("bathtub on a clean channel has a wide error-free center") {
    ScenarioConfig cfg = base_config();
    cfg.run_n_ui = 240000;
    cfg.run_warmup_ui = 120000;
    const auto curve = bathtub_scan(cfg, 0.45, 19, 4096);
    REQUIRE(curve.points.size() == 19);
    // error-free center, errors at the edges
    std::uint64_t center_errors = 0, edge_errors = 0;
    for (const auto& p : curve.points) {
        if (std::abs(p.phase_ui) < 0.15)
            center_errors += p.errors;
        if (std::abs(p.phase_ui) > 0.40)
            edge_errors += p.errors;
    }
    REQUIRE(center_errors == 0);
    REQUIRE(edge_errors > 0);
    // monotone nonincreasing BER from each edge toward the center, within bounds
    const auto& pts = curve.points;
    for (std::size_t i = 1; i + 1 < pts.size() / 2; ++i)
        REQUIRE(pts[i].ber <= pts[i - 1].ber + pts[i - 1].ber_upper);
}

TEST_CASE("eye accumulation matches the cursor-oracle margin at lock") {
    ScenarioConfig cfg = base_config();
    cfg.run_n_ui = 500000;
    cfg.run_warmup_ui = 200000;
    cfg.run_eye_decimate = 4;
    SimEngine eng(cfg);
    const auto r = eng.run();
    const EyeDiagram* eye = eng.eye();
    REQUIRE(eye != nullptr);
    const double vem_meas = measure_vem(*eye);
    const auto sbr = cfg.make_sbr();
    // the histogram opening spans both symbol classes: 2x the one-sided margin
    const double vem_oracle = 2.0 * vem_at_phase(sbr, 0.0, r.lane[0].lock_phase_ui);
    REQUIRE(vem_meas ==
            Catch::Approx(vem_oracle).margin(2.5 * eye->bin_width()));
}

TEST_CASE("eye capture keeps the DFE reference aligned when the lock wraps") {
    // heavy post-cursor with a DFE tap, and a lock phase that sits just left
    // of the next bit's cursor (integer part of the sample alignment is 1)
    ScenarioConfig cfg;
    cfg.channel_cursors = {0.16, 1.0, 0.37};
    cfg.afe_dfe_tap = 0.285;
    cfg.afe_noise_sigma = 0.02;
    cfg.eca_enabled = true;
    cfg.eca_k_step = 1.0 / 32.0;
    cfg.fdiv_tracking_on = false;
    cfg.run_n_ui = 2600000;
    cfg.run_warmup_ui = 2400000;
    cfg.run_eye_decimate = 8;
    SimEngine eng(cfg);
    const auto r = eng.run();
    const EyeDiagram* eye = eng.eye();
    REQUIRE(eye != nullptr);
    const auto sbr = cfg.make_sbr();
    const double vem_oracle =
        2.0 * vem_at_phase(sbr, cfg.afe_dfe_tap, wrap_half(r.lane[0].lock_phase_ui));
    // a sign-flipped DFE reference would collapse the opening by 4*tap
    REQUIRE(measure_vem(*eye) ==
            Catch::Approx(vem_oracle).margin(3.0 * eye->bin_width()));
}

TEST_CASE("integral clamp flags loss of lock with a nonzero-exit report") {
    ScenarioConfig cfg = base_config();
    cfg.fdiv_tracking_on = true;
    cfg.integral_clamp = 0.0005; // far below the 2500 ppm requirement
    cfg.clock_ppm_offset = 2500.0;
    cfg.run_n_ui = 200000;
    cfg.run_warmup_ui = 100000;
    const auto r = run_scenario(cfg);
    REQUIRE(r.loss_of_lock);
    REQUIRE_FALSE(r.flags.empty());
}

TEST_CASE("sweeping k with ECA off traces the eye the ECA climbs") {
    // VEM at the lock phase as a function of the up:dn ratio peaks at the k
    // the background ECA converges to on the same channel
    ScenarioConfig cfg;
    cfg.channel_cursors = {0.16, 1.0, 0.37};
    cfg.afe_dfe_tap = 0.285;
    cfg.afe_noise_sigma = 0.02;
    cfg.eca_enabled = false;
    cfg.fdiv_tracking_on = false;
    cfg.run_n_ui = 400000;
    cfg.run_warmup_ui = 200000;
    const auto sbr = cfg.make_sbr();

    const std::vector<std::string> ks{"1.0", "0.75", "0.6", "0.5", "0.4"};
    const auto reports = sweep(cfg, "eca.k_init", ks);
    double best_vem = -1e9, best_k = 0.0;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        const double lock = wrap_half(reports[i].lane[0].lock_phase_ui);
        const double vem = vem_at_phase(sbr, cfg.afe_dfe_tap, lock);
        if (vem > best_vem) {
            best_vem = vem;
            best_k = std::stod(ks[i]);
        }
    }
    // ECA run on the same channel
    cfg.eca_enabled = true;
    cfg.eca_k_step = 1.0 / 32.0;
    cfg.run_n_ui = 2400000;
    cfg.run_warmup_ui = 2000000;
    const auto r_eca = run_scenario(cfg);
    REQUIRE(std::abs(r_eca.lane[0].k_ratio - best_k) <= 0.15);
}
