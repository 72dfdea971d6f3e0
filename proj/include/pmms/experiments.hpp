#ifndef PMMS_EXPERIMENTS_HPP
#define PMMS_EXPERIMENTS_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "pmms/config.hpp"
#include "pmms/handoff.hpp"
#include "pmms/mobility.hpp"
#include "pmms/prediction.hpp"

namespace pmms {

// trained models shared by the experiment runners
struct trained_models {
    grid_topology topo;
    path_history history;
    std::vector<mobility_rule> rules;
    rule_index index;
    transition_matrix tm;
};

trained_models train(const sim_config& cfg);

struct predictor_stats {
    std::string name;
    std::int64_t transitions = 0;
    std::int64_t correct = 0;
    double overall_pct = 0.0;   // per-transition mean
    double mean_path_pct = 0.0; // mean of per-path percentages
    std::map<int, std::int64_t> rank_histogram;
    std::int64_t unranked = 0;
    std::vector<double> per_path_pct; // by path order
};

struct accuracy_report {
    std::uint64_t seed = 0;
    int n_paths = 0;
    std::int64_t n_transitions = 0;
    double ip_expected_pct = 0.0; // mean of 1/|neighbors| over test transitions
    double dm_rule_coverage_pct = 0.0;
    std::vector<predictor_stats> predictors; // ltdmps_partial, ltdmps_full, lt_only, tm, ip
    std::vector<int> path_ids;
};

accuracy_report run_accuracy_experiment(const sim_config& cfg);

struct path_delay_row {
    int path_id = 0;
    int hops = 0; // events including the first association
    delay_breakdown mean;
    double total_mean_ms = 0.0;
    std::int64_t dropped_packets = 0;
    int low = 0, medium = 0, high = 0; // load class counts
};

struct rssi_trace_row {
    int transition = 0;
    int sample = 0;
    double current_mw = 0.0;
    double next_mw = 0.0;
    std::string event;
};

struct delay_report {
    std::uint64_t seed = 0;
    std::vector<handoff_event> events;
    std::vector<path_delay_row> per_path;
    std::vector<ledger_row> ledger_snapshots; // tick-major
    std::vector<std::int64_t> snapshot_ticks; // parallel to ledger_snapshots, path-local tick
    std::vector<int> snapshot_paths;
    std::vector<rssi_trace_row> rssi_trace;
    delay_breakdown overall_mean; // per-event means
    double overall_total_ms = 0.0;
    double prediction_accuracy_pct = 0.0;
    int n_emergency = 0;
    int n_first = 0;
};

delay_report run_delay_experiment(const sim_config& cfg);

struct drop_row {
    int path_id = 0;
    std::int64_t with_reservation_bits = 0;
    std::int64_t without_reservation_bits = 0;
};

struct drop_report {
    std::uint64_t seed = 0;
    std::vector<drop_row> rows;
    std::int64_t total_with_bits = 0;
    std::int64_t total_without_bits = 0;
};

drop_report run_drop_experiment(const sim_config& cfg);

// CSV emission; re-emitting the same report is byte-identical
void emit_accuracy_csv(const accuracy_report& r, const std::filesystem::path& out_dir);
void emit_delay_csv(const delay_report& r, const std::filesystem::path& out_dir);
void emit_drop_csv(const drop_report& r, const std::filesystem::path& out_dir);
void emit_history(const path_history& h, const std::filesystem::path& out_dir);
void emit_models_csv(const trained_models& m, const std::filesystem::path& out_dir);

// parse-back helper for summary files (`key,value` pairs and column tables)
std::map<std::string, double> read_summary_csv(const std::filesystem::path& file);

int run_all(const sim_config& cfg, const std::filesystem::path& out_dir);

} // namespace pmms

#endif
