#ifndef PMMS_RADIO_HPP
#define PMMS_RADIO_HPP

#include <cstdint>
#include <vector>

#include "pmms/rng.hpp"
#include "pmms/topology.hpp"

namespace pmms {

struct radio_config {
    double trans_power = 0.100; // W
    double gain_t = 1.0;
    double gain_r = 1.0;
    double frequency = 914e6; // Hz
    double loss = 1.0;        // system loss factor, >= 1
    double rssi_max = 0.100;  // W

    // threshold bands, in W on the display scale
    double warning_low = 3e-3;
    double warning_high = 4e-3;
    double handoff_low = 1e-3;
    double handoff_high = 2e-3;
    double next_ap_high = 65e-3;

    double receive_threshold = 1.427e-8; // W, free-space scale
    double noise_stddev_fraction = 0.0;  // multiplicative gaussian on amplitude
    double antenna_height = 1.5;         // m; no height term in free space, kept for config fidelity
    double scale_reference = 12.0;       // m; display normalization distance
};

struct rssi_sample {
    ap_id ap = 0;
    double rssi = 0.0; // W
    int channel = 1;
    std::int64_t timestamp = 0;
    bool weak = false; // below receive_threshold
};

enum class threshold_event { none, warning, handoff_ready };

// free-space received power: Pt*Gt*Gr*lambda^2 / ((4*pi)^2 * d^2 * L)
// d <= 0 is a domain error; d below 0.1 m clamps to 0.1 m (near field).
double friis_rssi(const radio_config& cfg, double distance_m);

// free-space curve renormalized so that rssi_max is reached at the reference
// distance: min(rssi_max, rssi_max * (ref/d)^2). The threshold bands live on
// this scale.
double display_rssi(const radio_config& cfg, double distance_m);

// one sample per AP covering current_region (at most 4), noisy when
// noise_stddev_fraction > 0, flagged weak below receive_threshold
std::vector<rssi_sample> sample_rssi(point mn_pos, const grid_topology& topo,
                                     region_id current_region, const radio_config& cfg,
                                     rng& rand, std::int64_t tick = 0);

// HandoffReady needs both the current-AP drop and a strong next AP
// (hysteresis pair, ping-pong damping); Warning needs only the drop.
threshold_event classify_threshold(double current_ap_rssi, double best_next_rssi,
                                   const radio_config& cfg);

} // namespace pmms

#endif
