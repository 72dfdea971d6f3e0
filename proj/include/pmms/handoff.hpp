#ifndef PMMS_HANDOFF_HPP
#define PMMS_HANDOFF_HPP

#include <cstdint>
#include <set>
#include <vector>

#include "pmms/prediction.hpp"
#include "pmms/reservation.hpp"
#include "pmms/rng.hpp"
#include "pmms/topology.hpp"

namespace pmms {

enum class load_class { low, medium, high };

struct delay_config {
    double min_channel_time_ms = 2.0;
    double max_channel_time_ms = 6.0;
    double ping_time_ms = 3.0;   // low load
    double oneway_time_ms = 2.0; // low load
    int n_channels = 11;
    int responding_channels = 3; // channels that actually host APs (1/6/11 plan)
    bool iapp_enabled = true;
    double surcharge_medium_ms = 2.0;
    double surcharge_high_ms = 5.0;
    double reassoc_jitter_ms = 1.0;
    double collision_per_node_ms = 1.0; // contention share of the load delay

    double proc_capacity_pps = 1e6; // packets/sec
    double arrival_max_pps = 950e3;
    double arrival_avg_pps = 650e3;
    double arrival_min_pps = 150e3;

    double drop_threshold_ms = 20.0;
    int packet_size_bytes = 1500;

    int load_low_max_nodes = 5;   // attached <= this -> low
    int load_high_min_nodes = 10; // attached >= this -> high
};

load_class classify_load(int attached, const delay_config& cfg = delay_config{});
double load_surcharge_ms(load_class load, const delay_config& cfg);
double arrival_rate_pps(load_class load, const delay_config& cfg);

// first association: per-channel probe, responding channels wait up to
// MaxChannelTime, silent ones time out at MinChannelTime; always within
// [N*min, N*max]. Subsequent handoffs: the target is pre-scanned, one ping.
double scan_delay_ms(bool first_association, int n_channels, const delay_config& cfg,
                     load_class load, rng& rand);

// first association: 4-message shared-key exchange; pre-authenticated
// handoffs pay a ping-scale liveness check
double auth_delay_ms(bool first_association, load_class load, const delay_config& cfg, rng& rand);

// 2 frames plain, 6 with IAPP context transfer
double reassoc_delay_ms(load_class load, bool iapp_enabled, const delay_config& cfg, rng& rand);

enum class queue_mode { standard, verbatim };

// mean queuing delay in seconds for processing rate a and arrival rate b;
// standard = 1/(a-b); verbatim keeps the printed two-term form 1/a + 1/(1-b/a)
double packet_delay_s(double a_pps, double b_pps, queue_mode mode = queue_mode::standard);

// cost of landing on an unplanned AP: one-channel probe, plus a full
// authentication when the target was never pre-authenticated
double prediction_penalty_ms(bool prediction_correct, bool target_preauthenticated,
                             const delay_config& cfg, load_class load, rng& rand);

// overflow = max(0, delay - threshold) * rate; buffered packets absorb first
std::int64_t packets_dropped(double total_delay_ms, double drop_threshold_ms,
                             double proc_rate_per_ms, std::int64_t buffered_capacity_packets);

struct delay_breakdown {
    double scan_ms = 0.0;
    double auth_ms = 0.0;
    double reassoc_ms = 0.0;
    double load_ms = 0.0;
    double packet_ms = 0.0;
    double prediction_ms = 0.0;

    double total_ms() const {
        return scan_ms + auth_ms + reassoc_ms + load_ms + packet_ms + prediction_ms;
    }
};

struct handoff_event {
    std::int64_t tick = 0;
    ap_id from_ap = 0;
    ap_id to_ap = 0;
    ap_id predicted = 0;
    bool prediction_correct = false;
    delay_breakdown delays;
    std::int64_t dropped_packets = 0;
    byte_count reserved_bytes_used = 0;
    bool first_association = false;
    bool emergency = false; // MN-initiated trigger, same delay path
    bool failed = false;    // unreachable target
    load_class load = load_class::low;
    int attached_nodes = 0;
};

struct handoff_context {
    const grid_topology* topo = nullptr;
    const delay_config* cfg = nullptr;
    mn_id mn = 0;
    ap_id from_ap = 0;
    ap_id to_ap = 0;
    bool first_association = false;
    int attached_at_target = 0;
    std::int64_t tick = 0;
    bool emergency = false;
    std::set<ap_id>* preauthenticated = nullptr; // updated with the new neighborhood
    std::vector<handoff_event>* cache = nullptr; // handoff log, event appended
};

// composes the full delay breakdown for one attachment change, consults the
// ledger for buffered capacity, logs the event and pre-authenticates the new
// AP's neighbors
handoff_event execute_handoff(handoff_context& ctx, const ranked_prediction& prediction,
                              reservation_ledger& ledger, rng& rand);

} // namespace pmms

#endif
