#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmms/experiments.hpp"

using namespace pmms;

namespace {

sim_config small_config(std::uint64_t seed = 1) {
    sim_config cfg;
    cfg.seed = seed;
    cfg.n_history = 2000;
    cfg.n_test = 200;
    cfg.n_delay = 40;
    cfg.n_drop = 60;
    return cfg;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const predictor_stats& stats_for(const accuracy_report& r, const std::string& name) {
    for (const auto& p : r.predictors)
        if (p.name == name) return p;
    throw std::runtime_error("no predictor " + name);
}

} // namespace

TEST_CASE("accuracy experiment keeps the scheme ordering") {
    const auto report = run_accuracy_experiment(small_config());
    const auto& partial = stats_for(report, "ltdmps_partial");
    const auto& full = stats_for(report, "ltdmps_full");
    const auto& lt = stats_for(report, "lt_only");
    const auto& tm = stats_for(report, "tm");
    const auto& ip = stats_for(report, "ip");

    CHECK(partial.overall_pct > tm.overall_pct);
    CHECK(tm.overall_pct > ip.overall_pct);
    CHECK(full.overall_pct >= partial.overall_pct);
    CHECK(full.overall_pct >= lt.overall_pct);
    CHECK(full.overall_pct >= tm.overall_pct);
    CHECK(full.overall_pct >= ip.overall_pct);
    CHECK(report.n_transitions > 0);
}

TEST_CASE("scheme ranks stay within the legal candidate window") {
    const auto report = run_accuracy_experiment(small_config(3));
    for (const auto& name : {"ltdmps_partial", "ltdmps_full"}) {
        const auto& p = stats_for(report, name);
        CHECK(p.unranked == 0);
        for (const auto& [rank, count] : p.rank_histogram) {
            CHECK(rank >= 1);
            CHECK(rank <= 3);
        }
    }
}

TEST_CASE("full combiner is correct whenever either side is") {
    // per-transition disjunction shows up as full >= partial in aggregate and
    // per path
    const auto report = run_accuracy_experiment(small_config(5));
    const auto& partial = stats_for(report, "ltdmps_partial");
    const auto& full = stats_for(report, "ltdmps_full");
    REQUIRE(partial.per_path_pct.size() == full.per_path_pct.size());
    for (std::size_t i = 0; i < full.per_path_pct.size(); ++i)
        CHECK(full.per_path_pct[i] >= partial.per_path_pct[i] - 1e-9);
}

TEST_CASE("ip accuracy tracks the analytic expectation") {
    const auto report = run_accuracy_experiment(small_config(7));
    const auto& ip = stats_for(report, "ip");
    CHECK(std::abs(ip.overall_pct - report.ip_expected_pct) < 5.0);
}

TEST_CASE("accuracy runs are reproducible") {
    const auto a = run_accuracy_experiment(small_config(11));
    const auto b = run_accuracy_experiment(small_config(11));
    REQUIRE(a.predictors.size() == b.predictors.size());
    for (std::size_t i = 0; i < a.predictors.size(); ++i) {
        CHECK(a.predictors[i].overall_pct == b.predictors[i].overall_pct);
        CHECK(a.predictors[i].rank_histogram == b.predictors[i].rank_histogram);
    }
}

TEST_CASE("delay experiment composes sane events") {
    auto cfg = small_config();
    const auto report = run_delay_experiment(cfg);
    REQUIRE(!report.events.empty());
    CHECK(report.per_path.size() == static_cast<std::size_t>(cfg.n_delay));
    CHECK(report.n_first == cfg.n_delay);

    for (const auto& ev : report.events) {
        CHECK(ev.delays.scan_ms > 0.0);
        CHECK(ev.delays.auth_ms > 0.0);
        CHECK(ev.delays.reassoc_ms > 0.0);
        CHECK(ev.delays.packet_ms > 0.0);
        CHECK_FALSE(ev.failed);
        if (ev.first_association) {
            // full scan dominates any later ping-based scan
            CHECK(ev.delays.scan_ms >= 11 * 2.0);
            CHECK(ev.dropped_packets == 0);
        } else {
            CHECK(ev.delays.scan_ms <= 8.0);
        }
    }
    CHECK(report.overall_total_ms > 0.0);
    CHECK(report.prediction_accuracy_pct > 50.0);
}

TEST_CASE("rssi trace walks warning into handoff-ready") {
    const auto report = run_delay_experiment(small_config());
    REQUIRE(!report.rssi_trace.empty());
    bool saw_warning = false, saw_ready = false, decayed = false;
    double prev = 1e9;
    for (const auto& row : report.rssi_trace) {
        if (row.transition != 1) continue;
        if (row.event == "warning") saw_warning = true;
        if (row.event == "handoff_ready") saw_ready = true;
        if (row.current_mw < prev) decayed = true;
        prev = row.current_mw;
    }
    CHECK(saw_warning);
    CHECK(saw_ready);
    CHECK(decayed);
}

TEST_CASE("reservation dominance on the paired drop run") {
    const auto report = run_drop_experiment(small_config(13));
    REQUIRE(report.rows.size() == 60);
    for (const auto& row : report.rows)
        CHECK(row.with_reservation_bits <= row.without_reservation_bits);
    CHECK(report.total_with_bits <= report.total_without_bits);
    CHECK(report.total_without_bits > 0); // the comparison is not vacuous
}

TEST_CASE("csv emission is deterministic and parses back") {
    const auto tmp = std::filesystem::temp_directory_path() / "pmms_exp_test";
    std::filesystem::remove_all(tmp);

    const auto cfg = small_config(17);
    const auto report = run_accuracy_experiment(cfg);
    emit_accuracy_csv(report, tmp / "a");
    emit_accuracy_csv(report, tmp / "b");
    CHECK(slurp(tmp / "a" / "accuracy_summary.csv") == slurp(tmp / "b" / "accuracy_summary.csv"));
    CHECK(slurp(tmp / "a" / "accuracy_paths.csv") == slurp(tmp / "b" / "accuracy_paths.csv"));
    CHECK(slurp(tmp / "a" / "rank_histogram.csv") == slurp(tmp / "b" / "rank_histogram.csv"));

    const auto summary = read_summary_csv(tmp / "a" / "accuracy_summary.csv");
    CHECK(summary.at("n_transitions") == doctest::Approx(report.n_transitions));
    for (const auto& p : report.predictors) {
        CHECK(summary.at(p.name + "_overall_pct") ==
              doctest::Approx(p.overall_pct).epsilon(1e-4));
    }
    std::filesystem::remove_all(tmp);
}

TEST_CASE("empty reports emit header-only files") {
    const auto tmp = std::filesystem::temp_directory_path() / "pmms_empty_test";
    std::filesystem::remove_all(tmp);
    emit_drop_csv(drop_report{}, tmp);
    std::ifstream in(tmp / "drops.csv");
    std::string header, extra;
    CHECK(std::getline(in, header));
    CHECK(header == "path_id,with_reservation_bits,without_reservation_bits");
    CHECK_FALSE(std::getline(in, extra));
    std::filesystem::remove_all(tmp);
}

TEST_CASE("training artifacts cover the corpus") {
    auto cfg = small_config(19);
    const auto models = train(cfg);
    CHECK(models.history.paths.size() == static_cast<std::size_t>(cfg.n_history));
    CHECK(models.rules.size() > 100);
    CHECK(models.index.size() == models.rules.size());

    const auto tmp = std::filesystem::temp_directory_path() / "pmms_train_test";
    std::filesystem::remove_all(tmp);
    emit_models_csv(models, tmp);
    CHECK(std::filesystem::exists(tmp / "rules.csv"));
    CHECK(std::filesystem::exists(tmp / "transition_matrix.csv"));
    std::filesystem::remove_all(tmp);
}
