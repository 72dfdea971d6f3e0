#ifndef PMMS_CONFIG_HPP
#define PMMS_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>

#include "pmms/handoff.hpp"
#include "pmms/mobility.hpp"
#include "pmms/prediction.hpp"
#include "pmms/radio.hpp"
#include "pmms/reservation.hpp"

namespace pmms {

// Flat `key = value` configuration. Keys carry the simulation-variable names
// used throughout (buffer_size, minChannelTime, RSSI_threshold, ...) plus the
// model knobs; values accept unit suffixes (MB, msec, mW, W, Hz, m,
// packets/sec) and `lo to hi` bands. Unknown keys are rejected.
struct sim_config {
    // simulation variables
    byte_count buffer_size = 100'000'000;     // 100 MB
    byte_count audio_file_size = 20'000'000;  // 20 MB
    byte_count text_file_size = 5'000'000;    // 5 MB
    double min_channel_time_ms = 2.0;
    double max_channel_time_ms = 6.0;
    double ping_time_ms = 3.0;
    double oneway_time_ms = 2.0;
    double rssi_max_w = 0.100;
    double rssi_threshold_low_w = 3e-3;
    double rssi_threshold_high_w = 4e-3;
    double rssi_handoff_low_w = 1e-3;
    double rssi_handoff_high_w = 2e-3;
    double antenna_height_m = 1.5;
    double wireless_frequency_hz = 914e6;
    double bandwidth_hz = 2e6;
    double receivepower_threshold_w = 1.427e-8;
    double trans_power_w = 0.100;
    double proc_cap_pps = 1e6;
    double arrivalrate_max_pps = 950e3;
    double arrivalrate_avg_pps = 650e3;
    double arrivalrate_min_pps = 150e3;
    int load_high_min_nodes = 10; // >= 10 -> high
    int load_low_max_nodes = 5;   // <= 5  -> low
    int load_min_nodes = 1;

    // grid
    int ap_rows = 5;
    int ap_cols = 5;
    double ap_spacing_m = 100.0;

    // run sizes and seeding
    std::uint64_t seed = 1;
    std::uint64_t history_seed = 0; // 0 = derived from seed
    std::uint64_t test_seed = 0;    // 0 = derived from seed
    int n_history = 10000;
    int n_test = 1000;
    int n_delay = 100;
    int n_drop = 1000;

    // mobility
    double beta = 0.85; // center bias
    int dwell_min = 1;
    int dwell_max = 5;
    int history_min_aps = 2;
    int history_max_aps = 6;
    int test_min_aps = 3;
    int test_max_aps = 6;

    // mining / prediction
    std::int64_t min_support = 2;
    double min_confidence = 0.02;
    int max_head_len = 4;
    double lt_margin = 0.10;
    double lt_progress = 0.85;     // fraction of the move walked when the last sample is taken
    double lt_error_rate = 0.60;   // injected-error flip probability (LT-only report)
    double noise_stddev_fraction = 0.25;
    double next_ap_high_w = 65e-3;
    int tm_x = 1;

    // radio display scale
    double rssi_scale_reference_m = 12.0;

    // delays
    int n_channels = 11;
    int responding_channels = 3;
    bool iapp_enabled = true;
    double surcharge_medium_ms = 2.0;
    double surcharge_high_ms = 5.0;
    double reassoc_jitter_ms = 1.0;
    double collision_per_node_ms = 1.0;
    double drop_threshold_ms = 20.0;
    int packet_size_bytes = 1500;
    double load_mean_nodes = 4.0;

    // reservation
    double stage1_fraction = 0.05;
    double stage2_audio_fraction = 0.05;
    double stage2_text_fraction = 0.02;
    std::int64_t reservation_timeout_ticks = 2;
    double emergency_reserve_fraction = 0.0;
    int audio_tos = 46;

    // derived module configs
    radio_config radio() const;
    delay_config delays() const;
    reservation_config reservations() const;
    mobility_config history_mobility() const;
    mobility_config test_mobility() const;
    prediction_config predictor() const;
    std::set<int> audio_tags() const { return {audio_tos}; }

    std::uint64_t effective_history_seed() const;
    std::uint64_t effective_test_seed() const;

    void set(const std::string& key, const std::string& value); // throws config_error
    void validate() const;                                      // throws config_error

    static sim_config from_file(const std::filesystem::path& file);
    static sim_config from_stream(std::istream& in, const std::string& origin);
};

} // namespace pmms

#endif
