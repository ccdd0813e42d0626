#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

namespace baudrx {

struct LaneReport {
    double lock_phase_ui = 0.0;
    int dlev_code = 0, pdlev_code = 0, bdlev_code = 0;
    double dlev_volts = 0.0, pdlev_volts = 0.0, bdlev_volts = 0.0;
    double k_ratio = 1.0;
    std::uint64_t bits = 0, errors = 0;
    double ber = 0.0;
    long up_votes = 0, dn_votes = 0;
    double residual_ppm = 0.0;
};

struct RunReport {
    std::uint64_t config_hash = 0;
    std::uint64_t seed = 0;
    long n_ui = 0, warmup_ui = 0, measured_ui = 0;
    int lanes = 0;
    std::vector<LaneReport> lane;
    double mean_div_ratio = 0.0;
    double frac_ctrl = 0.0;
    double freq_accum = 0.0;
    double k_dcdl = 0.0;
    double k_dcdl_rel_err = 0.0;
    bool loss_of_lock = false;
    long integral_settle_batch = 0;
    std::vector<std::string> flags;

    std::string config_hash_hex() const {
        char buf[20];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(config_hash));
        return buf;
    }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["config_hash"] = config_hash_hex();
        j["seed"] = seed;
        j["n_ui"] = n_ui;
        j["warmup_ui"] = warmup_ui;
        j["measured_ui"] = measured_ui;
        j["lanes"] = lanes;
        j["mean_div_ratio"] = mean_div_ratio;
        j["frac_ctrl"] = frac_ctrl;
        j["freq_accum"] = freq_accum;
        j["k_dcdl"] = k_dcdl;
        j["k_dcdl_rel_err"] = k_dcdl_rel_err;
        j["loss_of_lock"] = loss_of_lock;
        j["integral_settle_batch"] = integral_settle_batch;
        j["flags"] = flags;
        j["lane"] = nlohmann::json::array();
        for (const auto& l : lane) {
            nlohmann::json jl;
            jl["lock_phase_ui"] = l.lock_phase_ui;
            jl["dlev_code"] = l.dlev_code;
            jl["pdlev_code"] = l.pdlev_code;
            jl["bdlev_code"] = l.bdlev_code;
            jl["dlev_volts"] = l.dlev_volts;
            jl["pdlev_volts"] = l.pdlev_volts;
            jl["bdlev_volts"] = l.bdlev_volts;
            jl["k_ratio"] = l.k_ratio;
            jl["bits"] = l.bits;
            jl["errors"] = l.errors;
            jl["ber"] = l.ber;
            jl["up_votes"] = l.up_votes;
            jl["dn_votes"] = l.dn_votes;
            jl["residual_ppm"] = l.residual_ppm;
            j["lane"].push_back(jl);
        }
        return j;
    }

    std::string to_json_text() const { return to_json().dump(2) + "\n"; }

    // key=value summary, one line per scalar
    std::string to_kv_text() const {
        std::string out;
        auto kv = [&out](const std::string& k, const std::string& v) {
            out += k + "=" + v + "\n";
        };
        char buf[64];
        auto fmt = [&buf](double v) {
            std::snprintf(buf, sizeof buf, "%.12g", v);
            return std::string(buf);
        };
        kv("config_hash", config_hash_hex());
        kv("seed", std::to_string(seed));
        kv("n_ui", std::to_string(n_ui));
        kv("measured_ui", std::to_string(measured_ui));
        kv("lanes", std::to_string(lanes));
        kv("mean_div_ratio", fmt(mean_div_ratio));
        kv("frac_ctrl", fmt(frac_ctrl));
        kv("k_dcdl", fmt(k_dcdl));
        kv("k_dcdl_rel_err", fmt(k_dcdl_rel_err));
        kv("loss_of_lock", loss_of_lock ? "1" : "0");
        kv("integral_settle_batch", std::to_string(integral_settle_batch));
        for (std::size_t i = 0; i < lane.size(); ++i) {
            const std::string p = "lane" + std::to_string(i) + ".";
            kv(p + "lock_phase_ui", fmt(lane[i].lock_phase_ui));
            kv(p + "dlev_code", std::to_string(lane[i].dlev_code));
            kv(p + "pdlev_code", std::to_string(lane[i].pdlev_code));
            kv(p + "bdlev_code", std::to_string(lane[i].bdlev_code));
            kv(p + "k_ratio", fmt(lane[i].k_ratio));
            kv(p + "ber", fmt(lane[i].ber));
            kv(p + "errors", std::to_string(lane[i].errors));
            kv(p + "residual_ppm", fmt(lane[i].residual_ppm));
        }
        return out;
    }
};

} // namespace baudrx
