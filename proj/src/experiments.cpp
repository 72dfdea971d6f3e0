#include "pmms/experiments.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace pmms {

namespace {

// rng stream tags; one derived stream per concern keeps the runs decoupled
enum stream_tag : std::uint64_t {
    tag_lt = 0x4c54,
    tag_flip = 0x464c,
    tag_ip = 0x4950,
    tag_delay = 0x444c,
    tag_traffic = 0x5446,
    tag_load = 0x4c44,
};

std::string fmt(double v, int precision = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, v);
    return buf;
}

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot open output file " + file.string());
    return out;
}

point lerp(point a, point b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

// per-transition prediction state shared by the accuracy and delay pipelines
struct transition_outcome {
    std::vector<ap_id> candidates; // legal next APs, current excluded
    ranked_prediction lt;          // natural location tracking over the candidates
    ranked_prediction partial;     // LT when decisive, else DM
    ranked_prediction full;        // with observed-wrong feedback
    point start;                   // waypoint the MN leaves from
    point end;                     // waypoint it walks to
    bool dm_covered = false;       // a mined rule matched
};

class scheme_runner {
public:
    scheme_runner(const sim_config& cfg, const trained_models& models)
        : cfg_(cfg), models_(models), radio_(cfg.radio()), pred_cfg_(cfg.predictor()) {}

    // transition k -> k+1 of the path; lt_rng drives waypoints and sample noise
    transition_outcome predict_transition(const mobile_path& path, std::size_t k,
                                          rng& lt_rng) const {
        const grid_topology& topo = models_.topo;
        const auto& cur = path.steps[k];
        const auto& nxt = path.steps[k + 1];

        transition_outcome out;
        for (ap_id a : candidate_next_aps(cur.ap, nxt.region, topo))
            if (a != cur.ap) out.candidates.push_back(a);
        assert(!out.candidates.empty() && out.candidates.size() <= 3);

        // re-derive waypoints consistent with the recorded attachments: the MN
        // left from near its current AP and settles in the next AP's cell
        out.start = sample_point_near_ap(topo, cur.region, cur.ap, lt_rng);
        out.end = sample_point_near_ap(topo, nxt.region, nxt.ap, lt_rng);
        const point pos = lerp(out.start, out.end, cfg_.lt_progress);

        auto samples = sample_rssi(pos, topo, nxt.region, radio_, lt_rng);
        std::erase_if(samples, [&](const rssi_sample& s) {
            return std::find(out.candidates.begin(), out.candidates.end(), s.ap) ==
                   out.candidates.end();
        });
        out.lt = predict_lt(samples, pred_cfg_);

        const auto prefix = prefix_aps(path, k);
        ranked_prediction dm = models_.index.predict(prefix, out.candidates);
        out.dm_covered = !dm.empty();
        const ranked_prediction& dm_eff = dm.empty() ? out.lt : dm;

        out.partial = complete(predict_ltdmps(out.lt, dm_eff, false), out.candidates);
        const bool lt_wrong = out.lt.decisive && out.lt.top() != nxt.ap;
        out.full = complete(predict_ltdmps(out.lt, dm_eff, lt_wrong), out.candidates);
        return out;
    }

    const sim_config& cfg() const { return cfg_; }
    const radio_config& radio() const { return radio_; }

private:
    static std::vector<ap_id> prefix_aps(const mobile_path& path, std::size_t k) {
        std::vector<ap_id> out;
        for (std::size_t i = 0; i <= k; ++i) out.push_back(path.steps[i].ap);
        return out;
    }

    // every legal candidate gets a rank: unranked ones trail at score 0 in
    // ascending id order
    static ranked_prediction complete(ranked_prediction pred, const std::vector<ap_id>& cands) {
        for (ap_id a : cands) {
            if (!frequency_rank(pred, a)) pred.candidates.push_back({a, 0.0});
        }
        return pred;
    }

    const sim_config& cfg_;
    const trained_models& models_;
    radio_config radio_;
    prediction_config pred_cfg_;
};

struct tally {
    std::int64_t transitions = 0;
    std::int64_t correct = 0;
    std::map<int, std::int64_t> ranks;
    std::int64_t unranked = 0;
    std::vector<double> per_path_pct;
    std::int64_t path_correct = 0;
    std::int64_t path_transitions = 0;

    void record(const std::optional<int>& rank) {
        ++transitions;
        ++path_transitions;
        if (rank) {
            ++ranks[*rank];
            if (*rank == 1) {
                ++correct;
                ++path_correct;
            }
        } else {
            ++unranked;
        }
    }

    void close_path() {
        if (path_transitions > 0)
            per_path_pct.push_back(100.0 * static_cast<double>(path_correct) /
                                   static_cast<double>(path_transitions));
        path_correct = 0;
        path_transitions = 0;
    }

    predictor_stats finish(std::string name) const {
        predictor_stats s;
        s.name = std::move(name);
        s.transitions = transitions;
        s.correct = correct;
        s.overall_pct =
            transitions == 0 ? 0.0
                             : 100.0 * static_cast<double>(correct) / static_cast<double>(transitions);
        double sum = 0.0;
        for (double v : per_path_pct) sum += v;
        s.mean_path_pct = per_path_pct.empty() ? 0.0 : sum / static_cast<double>(per_path_pct.size());
        s.rank_histogram = ranks;
        s.unranked = unranked;
        s.per_path_pct = per_path_pct;
        return s;
    }
};

} // namespace

trained_models train(const sim_config& cfg) {
    cfg.validate();
    trained_models m;
    m.topo = build_grid(cfg.ap_rows, cfg.ap_cols, cfg.ap_spacing_m);
    m.history =
        generate_history(cfg.n_history, m.topo, cfg.history_mobility(), cfg.effective_history_seed());
    m.rules = mine_rules(m.history, cfg.min_support, cfg.min_confidence, cfg.max_head_len);
    m.index = rule_index(m.rules);
    m.tm = transition_matrix::build(m.history);
    return m;
}

accuracy_report run_accuracy_experiment(const sim_config& cfg) {
    const trained_models models = train(cfg);
    const grid_topology& topo = models.topo;

    if (cfg.effective_history_seed() == cfg.effective_test_seed())
        std::cerr << "warning: history and test seeds collide; test paths are in the corpus\n";
    const path_history test =
        generate_history(cfg.n_test, topo, cfg.test_mobility(), cfg.effective_test_seed());

    scheme_runner runner(cfg, models);
    rng lt_rng = derive_rng(cfg.seed, tag_lt);
    rng flip_rng = derive_rng(cfg.seed, tag_flip);
    rng ip_rng = derive_rng(cfg.seed, tag_ip);

    tally t_partial, t_full, t_lt, t_tm, t_ip;
    double ip_expected_sum = 0.0;
    std::int64_t covered = 0;
    std::int64_t transitions = 0;

    accuracy_report report;
    report.seed = cfg.seed;

    for (const auto& path : test.paths) {
        report.path_ids.push_back(path.id);
        for (std::size_t k = 0; k + 1 < path.steps.size(); ++k) {
            const ap_id actual = path.steps[k + 1].ap;
            const ap_id current = path.steps[k].ap;
            const auto outcome = runner.predict_transition(path, k, lt_rng);
            ++transitions;
            if (outcome.dm_covered) ++covered;

            t_partial.record(frequency_rank(outcome.partial, actual));
            t_full.record(frequency_rank(outcome.full, actual));

            // LT-only with injected errors: a decisive answer flips to some
            // other candidate with probability lt_error_rate
            ranked_prediction lt_inj = outcome.lt;
            if (lt_inj.decisive && outcome.candidates.size() > 1 &&
                flip_rng.next_double() < cfg.lt_error_rate) {
                std::vector<ap_id> others;
                for (ap_id a : outcome.candidates)
                    if (a != lt_inj.top()) others.push_back(a);
                const ap_id wrong = others[static_cast<std::size_t>(
                    flip_rng.uniform_int(0, static_cast<int>(others.size()) - 1))];
                ranked_prediction flipped;
                flipped.decisive = true;
                flipped.candidates.push_back({wrong, 1.0});
                for (const auto& c : lt_inj.candidates)
                    if (c.ap != wrong) flipped.candidates.push_back({c.ap, 0.0});
                lt_inj = flipped;
            }
            t_lt.record(frequency_rank(lt_inj, actual));

            const auto tm_pred = predict_tm(models.tm, current, topo.ap_count());
            t_tm.record(frequency_rank(tm_pred, actual));

            const ap_id ip_ans = predict_ip(current, topo, ip_rng);
            if (ip_ans == actual)
                t_ip.record(1);
            else
                t_ip.record(std::nullopt);
            ip_expected_sum += 1.0 / static_cast<double>(topo.ap_neighbors(current).size());
        }
        t_partial.close_path();
        t_full.close_path();
        t_lt.close_path();
        t_tm.close_path();
        t_ip.close_path();
    }

    report.n_paths = static_cast<int>(test.paths.size());
    report.n_transitions = transitions;
    report.ip_expected_pct =
        transitions == 0 ? 0.0 : 100.0 * ip_expected_sum / static_cast<double>(transitions);
    report.dm_rule_coverage_pct =
        transitions == 0 ? 0.0
                         : 100.0 * static_cast<double>(covered) / static_cast<double>(transitions);
    report.predictors.push_back(t_partial.finish("ltdmps_partial"));
    report.predictors.push_back(t_full.finish("ltdmps_full"));
    report.predictors.push_back(t_lt.finish("lt_only"));
    report.predictors.push_back(t_tm.finish("tm"));
    report.predictors.push_back(t_ip.finish("ip"));
    return report;
}

namespace {

// shared by the delay and drop experiments so that paired runs see identical
// draws; reservation handling itself consumes no randomness
struct path_sim_result {
    std::vector<handoff_event> events;
    int n_emergency = 0;
};

path_sim_result simulate_path(const mobile_path& path, const scheme_runner& runner,
                              const trained_models& models, bool reservation_enabled,
                              std::uint64_t root_seed, delay_report* detail) {
    const sim_config& cfg = runner.cfg();
    const grid_topology& topo = models.topo;
    const delay_config dcfg = cfg.delays();
    const radio_config& rcfg = runner.radio();

    const auto pid = static_cast<std::uint64_t>(path.id);
    rng lt_rng = derive_rng(root_seed, tag_lt ^ (pid << 8));
    rng delay_rng = derive_rng(root_seed, tag_delay ^ (pid << 8));
    rng load_rng = derive_rng(root_seed, tag_load ^ (pid << 8));
    rng traffic_rng = derive_rng(root_seed, tag_traffic ^ (pid << 8));

    const traffic_type traffic =
        traffic_rng.next_double() < 0.5 ? traffic_type::audio : traffic_type::text;

    reservation_ledger ledger(topo.ap_count(), cfg.reservations());
    std::set<ap_id> preauth;
    path_sim_result result;

    const auto draw_attached = [&]() {
        return std::max(1, load_rng.poisson(cfg.load_mean_nodes));
    };
    const auto snapshot = [&](std::int64_t tick) {
        if (!detail) return;
        for (const auto& row : ledger.snapshot()) {
            detail->ledger_snapshots.push_back(row);
            detail->snapshot_ticks.push_back(tick);
            detail->snapshot_paths.push_back(path.id);
        }
    };

    std::int64_t tick = 0;

    handoff_context first_ctx;
    first_ctx.topo = &topo;
    first_ctx.cfg = &dcfg;
    first_ctx.mn = path.id;
    first_ctx.from_ap = path.steps[0].ap;
    first_ctx.to_ap = path.steps[0].ap;
    first_ctx.first_association = true;
    first_ctx.attached_at_target = draw_attached();
    first_ctx.tick = tick;
    first_ctx.preauthenticated = &preauth;
    first_ctx.cache = &result.events;
    execute_handoff(first_ctx, ranked_prediction{}, ledger, delay_rng);
    tick += path.steps[0].dwell;

    for (std::size_t k = 0; k + 1 < path.steps.size(); ++k) {
        const auto& nxt = path.steps[k + 1];
        const auto outcome = runner.predict_transition(path, k, lt_rng);
        const ap_id predicted = outcome.full.top();

        if (reservation_enabled && predicted >= 0)
            ledger.first_stage_reserve(predicted, path.id, tick);

        // walk the move; the thresholds decide when the handoff fires
        bool threshold_fired = false;
        bool stage2_done = false;
        const int n_samples = 10;
        for (int j = 1; j <= n_samples; ++j) {
            const point pos =
                lerp(outcome.start, outcome.end, static_cast<double>(j) / n_samples);
            const double cur_disp =
                display_rssi(rcfg, std::max(0.1, distance(pos, path.steps[k].ap, topo)));
            double best_next = 0.0;
            double predicted_disp = 0.0;
            for (ap_id a : outcome.candidates) {
                const double disp = display_rssi(rcfg, std::max(0.1, distance(pos, a, topo)));
                best_next = std::max(best_next, disp);
                if (a == predicted) predicted_disp = disp;
            }
            // second stage waits for the predicted AP to come in strong
            if (reservation_enabled && !stage2_done && predicted >= 0 &&
                predicted_disp >= rcfg.next_ap_high &&
                ledger.has_live_reservation(path.id, predicted, tick)) {
                ledger.second_stage_reserve(predicted, path.id, traffic, tick);
                stage2_done = true;
            }
            const auto event = classify_threshold(cur_disp, best_next, rcfg);
            if (event == threshold_event::handoff_ready) {
                threshold_fired = true;
                break;
            }
            if (cur_disp < rcfg.handoff_low) break; // current link is dying, MN initiates
        }

        tick += 1; // travel
        ledger.expire_and_preempt(tick - 1);
        if (reservation_enabled && predicted >= 0)
            ledger.confirm(path.id, predicted, predicted == nxt.ap, tick);

        handoff_context ctx;
        ctx.topo = &topo;
        ctx.cfg = &dcfg;
        ctx.mn = path.id;
        ctx.from_ap = path.steps[k].ap;
        ctx.to_ap = nxt.ap;
        ctx.first_association = false;
        ctx.attached_at_target = draw_attached();
        ctx.tick = tick;
        ctx.emergency = !threshold_fired;
        ctx.preauthenticated = &preauth;
        ctx.cache = &result.events;
        execute_handoff(ctx, outcome.full, ledger, delay_rng);
        if (!threshold_fired) ++result.n_emergency;

        ledger.release(path.id, nxt.ap);
        snapshot(tick);
        tick += nxt.dwell;
    }
    return result;
}

std::vector<rssi_trace_row> make_rssi_trace(const grid_topology& topo, const radio_config& rcfg) {
    // straight AP-to-AP walk over two transitions, the shape behind the
    // warning / handoff-ready staging
    std::vector<rssi_trace_row> rows;
    const ap_id legs[3] = {0, 1, topo.ap_cols() + 1};
    const int n_samples = 12;
    for (int leg = 0; leg < 2; ++leg) {
        const point a = topo.ap_position(legs[leg]);
        const point b = topo.ap_position(legs[leg + 1]);
        for (int j = 1; j <= n_samples; ++j) {
            const point pos = lerp(a, b, static_cast<double>(j) / (n_samples + 1));
            const double cur = display_rssi(rcfg, std::max(0.1, std::hypot(pos.x - a.x, pos.y - a.y)));
            const double nxt = display_rssi(rcfg, std::max(0.1, std::hypot(pos.x - b.x, pos.y - b.y)));
            const auto event = classify_threshold(cur, nxt, rcfg);
            const char* label = event == threshold_event::handoff_ready ? "handoff_ready"
                                : event == threshold_event::warning     ? "warning"
                                                                        : "none";
            rows.push_back({leg + 1, j, cur * 1000.0, nxt * 1000.0, label});
        }
    }
    return rows;
}

} // namespace

delay_report run_delay_experiment(const sim_config& cfg) {
    const trained_models models = train(cfg);
    const path_history test = generate_history(cfg.n_delay, models.topo, cfg.test_mobility(),
                                               cfg.effective_test_seed());
    scheme_runner runner(cfg, models);

    delay_report report;
    report.seed = cfg.seed;
    delay_breakdown sum;
    double total_sum = 0.0;
    std::int64_t n_events = 0;
    std::int64_t n_handoffs = 0;
    std::int64_t n_correct = 0;

    for (const auto& path : test.paths) {
        const auto result = simulate_path(path, runner, models, true, cfg.seed, &report);
        report.n_emergency += result.n_emergency;

        path_delay_row row;
        row.path_id = path.id;
        row.hops = static_cast<int>(result.events.size());
        delay_breakdown path_sum;
        double path_total = 0.0;
        for (const auto& ev : result.events) {
            report.events.push_back(ev);
            path_sum.scan_ms += ev.delays.scan_ms;
            path_sum.auth_ms += ev.delays.auth_ms;
            path_sum.reassoc_ms += ev.delays.reassoc_ms;
            path_sum.load_ms += ev.delays.load_ms;
            path_sum.packet_ms += ev.delays.packet_ms;
            path_sum.prediction_ms += ev.delays.prediction_ms;
            path_total += ev.delays.total_ms();
            row.dropped_packets += ev.dropped_packets;
            if (ev.load == load_class::low) ++row.low;
            if (ev.load == load_class::medium) ++row.medium;
            if (ev.load == load_class::high) ++row.high;
            if (ev.first_association) {
                ++report.n_first;
            } else {
                ++n_handoffs;
                if (ev.prediction_correct) ++n_correct;
            }
        }
        const auto n = static_cast<double>(result.events.size());
        row.mean.scan_ms = path_sum.scan_ms / n;
        row.mean.auth_ms = path_sum.auth_ms / n;
        row.mean.reassoc_ms = path_sum.reassoc_ms / n;
        row.mean.load_ms = path_sum.load_ms / n;
        row.mean.packet_ms = path_sum.packet_ms / n;
        row.mean.prediction_ms = path_sum.prediction_ms / n;
        row.total_mean_ms = path_total / n;
        report.per_path.push_back(row);

        sum.scan_ms += path_sum.scan_ms;
        sum.auth_ms += path_sum.auth_ms;
        sum.reassoc_ms += path_sum.reassoc_ms;
        sum.load_ms += path_sum.load_ms;
        sum.packet_ms += path_sum.packet_ms;
        sum.prediction_ms += path_sum.prediction_ms;
        total_sum += path_total;
        n_events += static_cast<std::int64_t>(result.events.size());
    }

    const auto n = static_cast<double>(n_events);
    report.overall_mean.scan_ms = sum.scan_ms / n;
    report.overall_mean.auth_ms = sum.auth_ms / n;
    report.overall_mean.reassoc_ms = sum.reassoc_ms / n;
    report.overall_mean.load_ms = sum.load_ms / n;
    report.overall_mean.packet_ms = sum.packet_ms / n;
    report.overall_mean.prediction_ms = sum.prediction_ms / n;
    report.overall_total_ms = total_sum / n;
    report.prediction_accuracy_pct =
        n_handoffs == 0 ? 0.0
                        : 100.0 * static_cast<double>(n_correct) / static_cast<double>(n_handoffs);
    report.rssi_trace = make_rssi_trace(models.topo, runner.radio());
    return report;
}

drop_report run_drop_experiment(const sim_config& cfg) {
    const trained_models models = train(cfg);
    const path_history test = generate_history(cfg.n_drop, models.topo, cfg.test_mobility(),
                                               cfg.effective_test_seed());
    scheme_runner runner(cfg, models);

    drop_report report;
    report.seed = cfg.seed;
    const std::int64_t bits_per_packet = static_cast<std::int64_t>(cfg.packet_size_bytes) * 8;

    for (const auto& path : test.paths) {
        const auto with_res = simulate_path(path, runner, models, true, cfg.seed, nullptr);
        const auto without_res = simulate_path(path, runner, models, false, cfg.seed, nullptr);

        drop_row row;
        row.path_id = path.id;
        for (const auto& ev : with_res.events) row.with_reservation_bits += ev.dropped_packets;
        for (const auto& ev : without_res.events)
            row.without_reservation_bits += ev.dropped_packets;
        row.with_reservation_bits *= bits_per_packet;
        row.without_reservation_bits *= bits_per_packet;
        report.rows.push_back(row);
        report.total_with_bits += row.with_reservation_bits;
        report.total_without_bits += row.without_reservation_bits;
    }
    return report;
}

void emit_accuracy_csv(const accuracy_report& r, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    auto paths = open_out(out_dir / "accuracy_paths.csv");
    paths << "path_id,predictor,accuracy_pct\n";
    for (std::size_t i = 0; i < r.path_ids.size(); ++i) {
        for (const auto& p : r.predictors) {
            if (i < p.per_path_pct.size())
                paths << r.path_ids[i] << ',' << p.name << ',' << fmt(p.per_path_pct[i], 2) << '\n';
        }
    }

    auto ranks = open_out(out_dir / "rank_histogram.csv");
    ranks << "predictor,rank,count\n";
    for (const auto& p : r.predictors) {
        for (const auto& [rank, count] : p.rank_histogram)
            ranks << p.name << ',' << rank << ',' << count << '\n';
        if (p.unranked > 0) ranks << p.name << ",absent," << p.unranked << '\n';
    }

    auto summary = open_out(out_dir / "accuracy_summary.csv");
    summary << "key,value\n";
    summary << "seed," << r.seed << '\n';
    summary << "n_paths," << r.n_paths << '\n';
    summary << "n_transitions," << r.n_transitions << '\n';
    summary << "ip_expected_pct," << fmt(r.ip_expected_pct, 4) << '\n';
    summary << "dm_rule_coverage_pct," << fmt(r.dm_rule_coverage_pct, 4) << '\n';
    for (const auto& p : r.predictors) {
        summary << p.name << "_overall_pct," << fmt(p.overall_pct, 4) << '\n';
        summary << p.name << "_mean_path_pct," << fmt(p.mean_path_pct, 4) << '\n';
    }
}

void emit_delay_csv(const delay_report& r, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    auto events = open_out(out_dir / "delay_events.csv");
    events << "tick,from_ap,to_ap,predicted,correct,scan_ms,auth_ms,reassoc_ms,load_ms,"
              "packet_ms,prediction_ms,total_ms,dropped,reserved_bytes\n";
    for (const auto& ev : r.events) {
        events << ev.tick << ',' << ev.from_ap << ',' << ev.to_ap << ',' << ev.predicted << ','
               << (ev.prediction_correct ? 1 : 0) << ',' << fmt(ev.delays.scan_ms) << ','
               << fmt(ev.delays.auth_ms) << ',' << fmt(ev.delays.reassoc_ms) << ','
               << fmt(ev.delays.load_ms) << ',' << fmt(ev.delays.packet_ms) << ','
               << fmt(ev.delays.prediction_ms) << ',' << fmt(ev.delays.total_ms()) << ','
               << ev.dropped_packets << ',' << ev.reserved_bytes_used << '\n';
    }

    auto paths = open_out(out_dir / "delay_paths.csv");
    paths << "path_id,hops,scan_ms,auth_ms,reassoc_ms,load_ms,packet_ms,prediction_ms,"
             "total_ms,dropped_packets,low,medium,high\n";
    for (const auto& row : r.per_path) {
        paths << row.path_id << ',' << row.hops << ',' << fmt(row.mean.scan_ms) << ','
              << fmt(row.mean.auth_ms) << ',' << fmt(row.mean.reassoc_ms) << ','
              << fmt(row.mean.load_ms) << ',' << fmt(row.mean.packet_ms) << ','
              << fmt(row.mean.prediction_ms) << ',' << fmt(row.total_mean_ms) << ','
              << row.dropped_packets << ',' << row.low << ',' << row.medium << ',' << row.high
              << '\n';
    }

    auto ledger = open_out(out_dir / "ledger_snapshots.csv");
    ledger << "path_id,tick,ap,free,active_bytes,passive_bytes\n";
    for (std::size_t i = 0; i < r.ledger_snapshots.size(); ++i) {
        const auto& row = r.ledger_snapshots[i];
        ledger << r.snapshot_paths[i] << ',' << r.snapshot_ticks[i] << ',' << row.ap << ','
               << row.free << ',' << row.active << ',' << row.passive << '\n';
    }

    auto trace = open_out(out_dir / "rssi_trace.csv");
    trace << "transition,sample,current_mw,next_mw,event\n";
    for (const auto& row : r.rssi_trace) {
        trace << row.transition << ',' << row.sample << ',' << fmt(row.current_mw, 4) << ','
              << fmt(row.next_mw, 4) << ',' << row.event << '\n';
    }

    auto summary = open_out(out_dir / "delay_summary.csv");
    summary << "key,value\n";
    summary << "seed," << r.seed << '\n';
    summary << "n_events," << r.events.size() << '\n';
    summary << "n_first_associations," << r.n_first << '\n';
    summary << "n_emergency," << r.n_emergency << '\n';
    summary << "scan_mean_ms," << fmt(r.overall_mean.scan_ms, 4) << '\n';
    summary << "auth_mean_ms," << fmt(r.overall_mean.auth_ms, 4) << '\n';
    summary << "reassoc_mean_ms," << fmt(r.overall_mean.reassoc_ms, 4) << '\n';
    summary << "load_mean_ms," << fmt(r.overall_mean.load_ms, 4) << '\n';
    summary << "packet_mean_ms," << fmt(r.overall_mean.packet_ms, 6) << '\n';
    summary << "prediction_mean_ms," << fmt(r.overall_mean.prediction_ms, 4) << '\n';
    summary << "total_mean_ms," << fmt(r.overall_total_ms, 4) << '\n';
    summary << "prediction_accuracy_pct," << fmt(r.prediction_accuracy_pct, 4) << '\n';
}

void emit_drop_csv(const drop_report& r, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);

    auto rows = open_out(out_dir / "drops.csv");
    rows << "path_id,with_reservation_bits,without_reservation_bits\n";
    for (const auto& row : r.rows)
        rows << row.path_id << ',' << row.with_reservation_bits << ','
             << row.without_reservation_bits << '\n';

    auto summary = open_out(out_dir / "drops_summary.csv");
    summary << "key,value\n";
    summary << "seed," << r.seed << '\n';
    summary << "n_paths," << r.rows.size() << '\n';
    summary << "total_with_bits," << r.total_with_bits << '\n';
    summary << "total_without_bits," << r.total_without_bits << '\n';
}

void emit_history(const path_history& h, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    save_history(h, out_dir / "history.txt");
}

void emit_models_csv(const trained_models& m, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto rules = open_out(out_dir / "rules.csv");
    save_rules(m.rules, rules);

    auto tm = open_out(out_dir / "transition_matrix.csv");
    tm << "from_ap,to_ap,count,probability\n";
    for (ap_id from = 0; from < m.topo.ap_count(); ++from) {
        for (const auto& cand : m.tm.ranked_row(from)) {
            tm << from << ',' << cand.ap << ',' << m.tm.count(from, cand.ap) << ','
               << fmt(cand.score, 6) << '\n';
        }
    }
}

std::map<std::string, double> read_summary_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::map<std::string, double> out;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        const auto comma = line.find(',');
        if (comma == std::string::npos) continue;
        const std::string key = line.substr(0, comma);
        try {
            out[key] = std::stod(line.substr(comma + 1));
        } catch (const std::logic_error&) {
            // non-numeric values are skipped
        }
    }
    return out;
}

int run_all(const sim_config& cfg, const std::filesystem::path& out_dir) {
    const trained_models models = train(cfg);
    emit_history(models.history, out_dir);
    emit_models_csv(models, out_dir);
    emit_accuracy_csv(run_accuracy_experiment(cfg), out_dir);
    emit_delay_csv(run_delay_experiment(cfg), out_dir);
    emit_drop_csv(run_drop_experiment(cfg), out_dir);
    return 0;
}

} // namespace pmms
