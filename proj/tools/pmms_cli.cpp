#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmms/config.hpp"
#include "pmms/experiments.hpp"

namespace {

struct cli_options {
    std::string config_file;
    std::string out_dir = "out";
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

pmms::sim_config load_config(const cli_options& opt) {
    pmms::sim_config cfg;
    std::string file = opt.config_file;
    if (file.empty()) {
        if (const char* env = std::getenv("PMMS_CONFIG")) file = env;
    }
    if (!file.empty()) cfg = pmms::sim_config::from_file(file);
    for (const auto& kv : opt.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw pmms::config_error("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (opt.seed_given) cfg.seed = opt.seed;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, cli_options& opt) {
    cmd->add_option("--config", opt.config_file, "configuration file (PMMS_CONFIG is the fallback)");
    cmd->add_option("--out-dir", opt.out_dir, "output directory");
    cmd->add_option("--set", opt.overrides, "override a config key, key=value")->take_all();
    cmd->add_option("--seed", opt.seed, "master seed")->each([&opt](const std::string&) {
        opt.seed_given = true;
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"predictive mobility management simulator"};
    app.require_subcommand(1);

    cli_options opt;
    auto* cmd_history = app.add_subcommand("generate-history", "generate the mobility corpus");
    auto* cmd_train = app.add_subcommand("train", "mine rules and build the transition matrix");
    auto* cmd_accuracy = app.add_subcommand("accuracy", "prediction accuracy experiment");
    auto* cmd_delay = app.add_subcommand("delay", "handoff delay experiment");
    auto* cmd_drops = app.add_subcommand("drops", "paired drop comparison experiment");
    auto* cmd_all = app.add_subcommand("all", "run everything into one output directory");
    for (auto* cmd : {cmd_history, cmd_train, cmd_accuracy, cmd_delay, cmd_drops, cmd_all})
        add_common(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1; // usage problems count as configuration errors
    }

    try {
        const pmms::sim_config cfg = load_config(opt);
        const std::filesystem::path out_dir = opt.out_dir;

        if (cmd_history->parsed()) {
            const auto topo = pmms::build_grid(cfg.ap_rows, cfg.ap_cols, cfg.ap_spacing_m);
            const auto history = pmms::generate_history(
                cfg.n_history, topo, cfg.history_mobility(), cfg.effective_history_seed());
            pmms::emit_history(history, out_dir);
            std::cout << "wrote " << history.paths.size() << " paths to "
                      << (out_dir / "history.txt").string() << "\n";
        } else if (cmd_train->parsed()) {
            const auto models = pmms::train(cfg);
            pmms::emit_history(models.history, out_dir);
            pmms::emit_models_csv(models, out_dir);
            std::cout << "mined " << models.rules.size() << " rules from "
                      << models.history.paths.size() << " paths\n";
        } else if (cmd_accuracy->parsed()) {
            const auto report = pmms::run_accuracy_experiment(cfg);
            pmms::emit_accuracy_csv(report, out_dir);
            for (const auto& p : report.predictors)
                std::cout << p.name << ": " << p.overall_pct << "%\n";
        } else if (cmd_delay->parsed()) {
            const auto report = pmms::run_delay_experiment(cfg);
            pmms::emit_delay_csv(report, out_dir);
            std::cout << "mean handoff delay: " << report.overall_total_ms << " ms over "
                      << report.events.size() << " events\n";
        } else if (cmd_drops->parsed()) {
            const auto report = pmms::run_drop_experiment(cfg);
            pmms::emit_drop_csv(report, out_dir);
            std::cout << "dropped bits with reservation: " << report.total_with_bits
                      << ", without: " << report.total_without_bits << "\n";
        } else if (cmd_all->parsed()) {
            pmms::run_all(cfg, out_dir);
            std::cout << "reports written to " << out_dir.string() << "\n";
        }
    } catch (const pmms::config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
