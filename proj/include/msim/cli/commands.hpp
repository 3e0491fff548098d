#pragma once

#include <optional>

#include "msim/agents/world_replay.hpp"
#include "msim/cli/config.hpp"
#include "msim/gan/checkpoint.hpp"
#include "msim/sim/exchange_agent.hpp"
#include "msim/stats/stylized.hpp"
#include "msim/synth/flow.hpp"

namespace msim::cli {

// Historical stream plus (for the cgan world) the trained model; loaded once
// and shared across the seeds of a command.
struct WorldInputs {
    std::vector<data::LobsterEvent> events;
    std::optional<gan::Checkpoint> checkpoint;
    std::optional<data::ScalerSet> scalers;
};

WorldInputs load_world_inputs(const SimConfig& cfg);

struct RunOutput {
    std::vector<sim::Event> event_log;
    std::vector<sim::ExchangeAgent::OrderActionRecord> order_log;
    std::vector<sim::ExchangeAgent::MidSample> mid_trace;
    std::vector<lob::Trade> trades;
    std::int64_t cancels_not_found = 0;
    lob::Volume endogenous_exec_volume = 0;
    std::optional<agents::ReplayWorldAgent::Counters> replay_counters;
    lob::Volume pov_transacted = 0;
    std::int64_t world_generated = 0;
};

RunOutput run_simulation(const SimConfig& cfg, const WorldInputs& inputs, std::uint64_t seed,
                         bool include_pov, std::optional<double> lambda_override = {});

stats::PriceSeries run_mid_series(const RunOutput& run, NanoTime start, NanoTime end,
                                  NanoTime step);

void write_run_dir(const std::string& dir, const RunOutput& run, NanoTime session_start,
                   NanoTime session_end);

// --- commands -------------------------------------------------------------

struct SampleCmdConfig {
    std::string out_dir = "sample";
    std::int64_t orders = 20000;
    std::uint64_t seed = 1;
    NanoTime session_start = parse_time_of_day("09:30:00");
    synth::FlowParams flow;
};

synth::FlowStats cmd_make_sample(const SampleCmdConfig& cfg);

struct TrainOutcome {
    std::string checkpoint_path;
    std::string scaler_path;
    std::string metrics_path;
    std::vector<gan::EpochMetrics> history;
};

TrainOutcome cmd_train(const TrainCmdConfig& cfg);

std::vector<std::string> cmd_simulate(const SimConfig& cfg); // per-seed output dirs

struct ImpactBand {
    NanoTime time = 0;
    double q05 = 0, q25 = 0, median = 0, q75 = 0, q95 = 0;
};

struct ImpactLambdaResult {
    double lambda = 0;
    std::vector<ImpactBand> bands;
};

struct ImpactResult {
    NanoTime grid_start = 0;
    NanoTime grid = kNsPerSec;
    std::vector<ImpactLambdaResult> per_lambda;
};

ImpactResult cmd_impact(const ImpactCmdConfig& cfg);

std::vector<stats::StylizedFactsReport> cmd_realism(const RealismCmdConfig& cfg);

} // namespace msim::cli
