#include "pmms/handoff.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pmms {

load_class classify_load(int attached, const delay_config& cfg) {
    if (attached >= cfg.load_high_min_nodes) return load_class::high;
    if (attached > cfg.load_low_max_nodes) return load_class::medium;
    return load_class::low;
}

double load_surcharge_ms(load_class load, const delay_config& cfg) {
    switch (load) {
    case load_class::medium: return cfg.surcharge_medium_ms;
    case load_class::high: return cfg.surcharge_high_ms;
    default: return 0.0;
    }
}

double arrival_rate_pps(load_class load, const delay_config& cfg) {
    switch (load) {
    case load_class::medium: return cfg.arrival_avg_pps;
    case load_class::high: return cfg.arrival_max_pps;
    default: return cfg.arrival_min_pps;
    }
}

double scan_delay_ms(bool first_association, int n_channels, const delay_config& cfg,
                     load_class load, rng& rand) {
    if (n_channels < 1) throw std::invalid_argument("scan_delay_ms: n_channels must be >= 1");
    if (first_association) {
        const int responding = std::min(cfg.responding_channels, n_channels);
        double total = static_cast<double>(n_channels - responding) * cfg.min_channel_time_ms;
        for (int i = 0; i < responding; ++i)
            total += rand.uniform(cfg.min_channel_time_ms, cfg.max_channel_time_ms);
        return total;
    }
    // the target AP and its channel are already known; one ping confirms it
    return cfg.ping_time_ms + load_surcharge_ms(load, cfg);
}

double auth_delay_ms(bool first_association, load_class load, const delay_config& cfg,
                     rng& rand) {
    if (first_association) {
        // Challenge-Request, Challenge-Response, Response, Approval
        return 4.0 * cfg.oneway_time_ms + load_surcharge_ms(load, cfg);
    }
    // already authenticated; liveness check at ping scale
    return rand.uniform(cfg.ping_time_ms + 1.0, cfg.ping_time_ms + 2.0) +
           load_surcharge_ms(load, cfg);
}

double reassoc_delay_ms(load_class load, bool iapp_enabled, const delay_config& cfg, rng& rand) {
    const int frames = iapp_enabled ? 6 : 2; // IAPP adds four context-transfer frames
    double d = static_cast<double>(frames) * cfg.oneway_time_ms + load_surcharge_ms(load, cfg);
    if (cfg.reassoc_jitter_ms > 0.0)
        d += rand.uniform(-cfg.reassoc_jitter_ms, cfg.reassoc_jitter_ms);
    return std::max(d, 0.0);
}

double packet_delay_s(double a_pps, double b_pps, queue_mode mode) {
    if (b_pps < 0.0 || b_pps >= a_pps)
        throw std::domain_error("packet_delay_s: need 0 <= b < a for a stable queue");
    if (mode == queue_mode::verbatim) return 1.0 / a_pps + 1.0 / (1.0 - b_pps / a_pps);
    return 1.0 / (a_pps - b_pps);
}

double prediction_penalty_ms(bool prediction_correct, bool target_preauthenticated,
                             const delay_config& cfg, load_class load, rng& rand) {
    if (prediction_correct) return 0.0;
    // unplanned target: probe its channel, authenticate if it was never reached
    double penalty = rand.uniform(cfg.min_channel_time_ms, cfg.max_channel_time_ms) +
                     load_surcharge_ms(load, cfg);
    if (!target_preauthenticated) penalty += 4.0 * cfg.oneway_time_ms;
    return penalty;
}

std::int64_t packets_dropped(double total_delay_ms, double drop_threshold_ms,
                             double proc_rate_per_ms, std::int64_t buffered_capacity_packets) {
    const double overflow = std::max(0.0, total_delay_ms - drop_threshold_ms) * proc_rate_per_ms;
    const double dropped = overflow - static_cast<double>(buffered_capacity_packets);
    return dropped <= 0.0 ? 0 : static_cast<std::int64_t>(std::floor(dropped));
}

handoff_event execute_handoff(handoff_context& ctx, const ranked_prediction& prediction,
                              reservation_ledger& ledger, rng& rand) {
    const delay_config& cfg = *ctx.cfg;
    const load_class load = classify_load(ctx.attached_at_target, cfg);

    handoff_event ev;
    ev.tick = ctx.tick;
    ev.from_ap = ctx.from_ap;
    ev.to_ap = ctx.to_ap;
    ev.predicted = ctx.first_association ? ctx.to_ap : prediction.top();
    ev.prediction_correct = ev.predicted == ctx.to_ap;
    ev.first_association = ctx.first_association;
    ev.emergency = ctx.emergency;
    ev.load = load;
    ev.attached_nodes = ctx.attached_at_target;

    const bool reachable = ctx.first_association || ctx.to_ap == ctx.from_ap ||
                           ctx.topo->aps_adjacent(ctx.from_ap, ctx.to_ap);
    ev.failed = !reachable;

    const bool pre_authed =
        !ctx.preauthenticated || ctx.preauthenticated->count(ctx.to_ap) > 0;

    if (ctx.first_association || ev.failed) {
        ev.delays.scan_ms = scan_delay_ms(true, cfg.n_channels, cfg, load, rand);
        ev.delays.auth_ms = auth_delay_ms(true, load, cfg, rand);
        ev.delays.reassoc_ms = reassoc_delay_ms(load, false, cfg, rand);
    } else {
        ev.delays.scan_ms = scan_delay_ms(false, cfg.n_channels, cfg, load, rand);
        ev.delays.auth_ms = auth_delay_ms(!pre_authed, load, cfg, rand);
        ev.delays.reassoc_ms = reassoc_delay_ms(load, cfg.iapp_enabled, cfg, rand);
        ev.delays.prediction_ms =
            prediction_penalty_ms(ev.prediction_correct, pre_authed, cfg, load, rand);
    }
    ev.delays.load_ms = load_surcharge_ms(load, cfg) +
                        static_cast<double>(ctx.attached_at_target) * cfg.collision_per_node_ms;
    ev.delays.packet_ms =
        1000.0 * packet_delay_s(cfg.proc_capacity_pps, arrival_rate_pps(load, cfg));

    const double total = ev.delays.total_ms();
    const double proc_rate_per_ms = cfg.proc_capacity_pps / 1000.0;

    if (ev.failed) {
        // connection gap: everything in flight for the whole outage is lost
        ev.dropped_packets = static_cast<std::int64_t>(std::ceil(total * proc_rate_per_ms));
    } else if (!ctx.first_association) {
        ev.reserved_bytes_used = ledger.active_bytes(ctx.mn, ctx.to_ap);
        const auto buffered_packets = ev.reserved_bytes_used / cfg.packet_size_bytes;
        ev.dropped_packets =
            packets_dropped(total, cfg.drop_threshold_ms, proc_rate_per_ms, buffered_packets);
    }

    if (ctx.preauthenticated && !ev.failed) {
        ctx.preauthenticated->insert(ctx.to_ap);
        for (ap_id n : ctx.topo->ap_neighbors(ctx.to_ap)) ctx.preauthenticated->insert(n);
    }
    if (ctx.cache) ctx.cache->push_back(ev);
    return ev;
}

} // namespace pmms
