#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "msim/agents/pov.hpp"
#include "msim/gan/train.hpp"
#include "msim/util/time.hpp"

namespace msim::cli {

struct SimConfig {
    std::string symbol = "SYN";
    NanoTime session_start = parse_time_of_day("09:30:00");
    NanoTime session_end = parse_time_of_day("16:00:00");
    std::string messages_path;
    std::string orderbook_path;
    std::string world_kind = "cgan"; // cgan | replay
    std::string checkpoint_path;     // cgan only
    NanoTime warmup = 30 * kNsPerMin;
    NanoTime order_ttl = 5 * kNsPerMin;
    std::vector<agents::PovConfig> pov_agents;
    std::vector<std::uint64_t> seeds = {1};
    std::string out_dir = "out";
};

struct TrainCmdConfig {
    std::string messages_path;
    std::string orderbook_path;
    NanoTime session_open = parse_time_of_day("09:30:00");
    std::string out_dir = "model";
    gan::ModelHyper hyper;
    gan::TrainConfig train;
};

struct ImpactCmdConfig {
    SimConfig sim;
    std::vector<double> lambdas;
    NanoTime grid = kNsPerSec;
    NanoTime measure_start = 0; // defaults to POV window padded by 30 min
    NanoTime measure_end = 0;
};

struct RealismTraceSpec {
    std::string id;
    std::string dir;           // simulate output directory, or
    std::string messages_path; // a historical LOBSTER pair
    std::string orderbook_path;
};

struct RealismCmdConfig {
    std::vector<RealismTraceSpec> traces;
    std::string out_dir = "realism";
    NanoTime grid = kNsPerMin;
    int max_lag = 20;
    std::vector<int> kurtosis_dts = {1, 5, 15, 30};
    bool squared_clustering = false; // |r| by default, r^2 behind this flag
};

// Parsers validate the schema up front: referenced files must exist, seeds
// must be distinct, agent types must be known.
SimConfig parse_sim_config(const std::string& json_text, const std::string& base_dir);
SimConfig load_sim_config(const std::string& path);

TrainCmdConfig parse_train_config(const std::string& json_text, const std::string& base_dir);
TrainCmdConfig load_train_config(const std::string& path);

ImpactCmdConfig parse_impact_config(const std::string& json_text, const std::string& base_dir);
ImpactCmdConfig load_impact_config(const std::string& path);

RealismCmdConfig parse_realism_config(const std::string& json_text, const std::string& base_dir);
RealismCmdConfig load_realism_config(const std::string& path);

} // namespace msim::cli
