#include "pmms/radio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmms {

namespace {

constexpr double k_speed_of_light = 299792458.0; // m/s
constexpr double k_near_field_m = 0.1;

} // namespace

double friis_rssi(const radio_config& cfg, double distance_m) {
    if (distance_m <= 0.0)
        throw std::domain_error("friis_rssi: distance must be positive");
    const double d = std::max(distance_m, k_near_field_m);
    const double lambda = k_speed_of_light / cfg.frequency;
    const double four_pi = 4.0 * 3.14159265358979323846;
    return cfg.trans_power * cfg.gain_t * cfg.gain_r * lambda * lambda /
           (four_pi * four_pi * d * d * cfg.loss);
}

double display_rssi(const radio_config& cfg, double distance_m) {
    if (distance_m <= 0.0)
        throw std::domain_error("display_rssi: distance must be positive");
    const double d = std::max(distance_m, k_near_field_m);
    const double ratio = cfg.scale_reference / d;
    return std::min(cfg.rssi_max, cfg.rssi_max * ratio * ratio);
}

std::vector<rssi_sample> sample_rssi(point mn_pos, const grid_topology& topo,
                                     region_id current_region, const radio_config& cfg,
                                     rng& rand, std::int64_t tick) {
    std::vector<rssi_sample> out;
    for (ap_id a : topo.region_aps(current_region)) {
        const double d = distance(mn_pos, a, topo);
        double rssi = friis_rssi(cfg, std::max(d, k_near_field_m));
        if (cfg.noise_stddev_fraction > 0.0) {
            rssi *= 1.0 + cfg.noise_stddev_fraction * rand.gaussian();
            rssi = std::max(rssi, 0.0);
        }
        out.push_back({a, rssi, topo.ap_channel(a), tick, rssi < cfg.receive_threshold});
    }
    return out;
}

threshold_event classify_threshold(double current_ap_rssi, double best_next_rssi,
                                   const radio_config& cfg) {
    if (current_ap_rssi <= cfg.handoff_high && best_next_rssi >= cfg.next_ap_high)
        return threshold_event::handoff_ready;
    if (current_ap_rssi <= cfg.warning_high)
        return threshold_event::warning;
    return threshold_event::none;
}

} // namespace pmms
