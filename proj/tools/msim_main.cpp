#include <iostream>

#include <CLI11.hpp>

#include "msim/cli/commands.hpp"

using namespace msim;

int main(int argc, char** argv) {
    CLI::App app{"msim - generative limit-order-book market simulator"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    std::string mode_override;
    std::string gp_mode_override;
    int seeds_override = 0;

    // make-sample
    auto* make_sample = app.add_subcommand(
        "make-sample", "generate a synthetic LOBSTER-format message/orderbook pair");
    cli::SampleCmdConfig sample_cfg;
    std::string sample_start = "09:30:00";
    make_sample->add_option("--out", sample_cfg.out_dir, "output directory");
    make_sample->add_option("--orders", sample_cfg.orders, "number of new orders to generate");
    make_sample->add_option("--seed", sample_cfg.seed, "process seed");
    make_sample->add_option("--start", sample_start, "session start (HH:MM:SS)");

    // train
    auto* train = app.add_subcommand("train", "fit scalers and train the order generator");
    train->add_option("--config", config_path, "train config json")->required();
    train->add_option("--out", out_override, "override output directory");
    train->add_option("--gp-mode", gp_mode_override,
                      "generated-point | interpolate | weight-clip");

    // simulate
    auto* simulate = app.add_subcommand("simulate", "run the simulator, one directory per seed");
    simulate->add_option("--config", config_path, "sim config json")->required();
    simulate->add_option("--out", out_override, "override output directory");
    simulate->add_option("--mode", mode_override, "override world kind: cgan | replay");
    simulate->add_option("--seeds", seeds_override, "use seeds 1..N instead of the config list");

    // impact
    auto* impact = app.add_subcommand("impact", "paired with/without POV market-impact runs");
    impact->add_option("--config", config_path, "impact config json")->required();
    impact->add_option("--out", out_override, "override output directory");
    impact->add_option("--mode", mode_override, "override world kind: cgan | replay");
    impact->add_option("--seeds", seeds_override, "use seeds 1..N instead of the config list");

    // realism
    auto* realism = app.add_subcommand("realism", "stylized-facts comparison across traces");
    realism->add_option("--config", config_path, "realism config json")->required();
    realism->add_option("--out", out_override, "override output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (make_sample->parsed()) {
            sample_cfg.session_start = parse_time_of_day(sample_start);
            const auto stats = cli::cmd_make_sample(sample_cfg);
            std::cout << "wrote " << sample_cfg.out_dir << ": " << stats.new_orders
                      << " orders, " << stats.executions << " executions, "
                      << stats.deletes << " deletes, " << stats.partial_cancels
                      << " partial cancels\n";
            return 0;
        }
        if (train->parsed()) {
            cli::TrainCmdConfig cfg = cli::load_train_config(config_path);
            if (!out_override.empty()) cfg.out_dir = out_override;
            if (!gp_mode_override.empty())
                cfg.train.gp_mode = gan::gp_mode_from_name(gp_mode_override);
            const auto outcome = cli::cmd_train(cfg);
            std::cout << "checkpoint: " << outcome.checkpoint_path << "\n";
            return 0;
        }
        if (simulate->parsed()) {
            cli::SimConfig cfg = cli::load_sim_config(config_path);
            if (!out_override.empty()) cfg.out_dir = out_override;
            if (!mode_override.empty()) cfg.world_kind = mode_override;
            if (seeds_override > 0) {
                cfg.seeds.clear();
                for (int s = 1; s <= seeds_override; ++s) cfg.seeds.push_back(s);
            }
            const auto dirs = cli::cmd_simulate(cfg);
            for (const auto& dir : dirs) std::cout << dir << "\n";
            return 0;
        }
        if (impact->parsed()) {
            cli::ImpactCmdConfig cfg = cli::load_impact_config(config_path);
            if (!out_override.empty()) cfg.sim.out_dir = out_override;
            if (!mode_override.empty()) cfg.sim.world_kind = mode_override;
            if (seeds_override > 0) {
                cfg.sim.seeds.clear();
                for (int s = 1; s <= seeds_override; ++s) cfg.sim.seeds.push_back(s);
            }
            cli::cmd_impact(cfg);
            std::cout << "impact report: " << cfg.sim.out_dir << "/impact_report.json\n";
            return 0;
        }
        if (realism->parsed()) {
            cli::RealismCmdConfig cfg = cli::load_realism_config(config_path);
            if (!out_override.empty()) cfg.out_dir = out_override;
            cli::cmd_realism(cfg);
            std::cout << "realism report: " << cfg.out_dir << "/realism_report.json\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
