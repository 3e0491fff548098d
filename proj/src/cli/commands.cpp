#include "msim/cli/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "msim/agents/world_cgan.hpp"
#include "msim/sim/kernel.hpp"
#include "msim/util/csv.hpp"

namespace msim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

WorldInputs load_world_inputs(const SimConfig& cfg) {
    WorldInputs inputs;
    data::LobsterData parsed = data::parse_lobster(cfg.messages_path, cfg.orderbook_path);
    for (const auto& issue : parsed.issues)
        std::cerr << "parse: " << issue.file << ":" << issue.line << ": " << issue.reason
                  << " (row skipped)\n";
    inputs.events = std::move(parsed.events);
    if (cfg.world_kind == "cgan") {
        inputs.checkpoint = gan::load_checkpoint(cfg.checkpoint_path);
        fs::path scaler_path = inputs.checkpoint->scaler_ref;
        if (scaler_path.is_relative())
            scaler_path = fs::path(cfg.checkpoint_path).parent_path() / scaler_path;
        inputs.scalers = data::ScalerSet::load(scaler_path.string());
    }
    return inputs;
}

RunOutput run_simulation(const SimConfig& cfg, const WorldInputs& inputs, std::uint64_t seed,
                         bool include_pov, std::optional<double> lambda_override) {
    sim::KernelConfig kcfg;
    kcfg.start_time = cfg.session_start;
    kcfg.end_time = cfg.session_end;
    kcfg.master_seed = seed;
    sim::Kernel kernel(kcfg);

    auto exchange = std::make_shared<sim::ExchangeAgent>();
    kernel.register_agent(exchange);

    std::shared_ptr<agents::CganWorldAgent> cgan_world;
    std::shared_ptr<agents::ReplayWorldAgent> replay_world;
    if (cfg.world_kind == "cgan") {
        agents::CganWorldConfig wcfg;
        wcfg.session_open = cfg.session_start;
        wcfg.warmup_until = cfg.session_start + cfg.warmup;
        wcfg.order_ttl = cfg.order_ttl;
        cgan_world = std::make_shared<agents::CganWorldAgent>(
            wcfg, inputs.checkpoint->hyper, inputs.checkpoint->gen, *inputs.scalers,
            inputs.events);
        kernel.register_agent(cgan_world);
    } else {
        replay_world = std::make_shared<agents::ReplayWorldAgent>(inputs.events);
        kernel.register_agent(replay_world);
    }

    std::vector<std::shared_ptr<agents::PovAgent>> povs;
    if (include_pov) {
        for (const agents::PovConfig& pov_cfg : cfg.pov_agents) {
            agents::PovConfig actual = pov_cfg;
            if (lambda_override) actual.lambda = *lambda_override;
            auto pov = std::make_shared<agents::PovAgent>(actual);
            povs.push_back(pov);
            kernel.register_agent(pov);
        }
    }

    kernel.run();

    RunOutput out;
    out.event_log = kernel.log();
    out.order_log = exchange->order_log();
    out.mid_trace = exchange->mid_trace();
    out.trades = exchange->book().trade_log();
    out.cancels_not_found = exchange->cancels_not_found();
    out.endogenous_exec_volume = exchange->book().cumulative_traded();
    if (replay_world) out.replay_counters = replay_world->counters();
    if (cgan_world) out.world_generated = cgan_world->generated_count();
    for (const auto& pov : povs) out.pov_transacted += pov->transacted();
    return out;
}

stats::PriceSeries run_mid_series(const RunOutput& run, NanoTime start, NanoTime end,
                                  NanoTime step) {
    std::vector<std::pair<NanoTime, double>> observations;
    observations.reserve(run.mid_trace.size());
    for (const auto& sample : run.mid_trace)
        if (sample.mid) observations.emplace_back(sample.time, sample.mid->ticks());
    return stats::resample_locf(observations, start, end, step);
}

void write_run_dir(const std::string& dir, const RunOutput& run, NanoTime session_start,
                   NanoTime session_end) {
    fs::create_directories(dir);

    {
        std::ofstream out(dir + "/event_log.csv");
        sim::write_event_log_csv(out, run.event_log);
    }
    {
        std::ofstream out(dir + "/orders.csv");
        out << "time,agent,side,price_ticks,volume,order_id,event\n";
        for (const auto& rec : run.order_log)
            out << fmt_int(rec.time) << ',' << rec.agent << ',' << rec.side << ','
                << fmt_int(rec.price) << ',' << fmt_int(rec.volume) << ','
                << fmt_int(static_cast<std::int64_t>(rec.order_id)) << ',' << rec.event << '\n';
    }
    {
        const stats::PriceSeries mid =
            run_mid_series(run, session_start, session_end, kNsPerSec);
        std::ofstream out(dir + "/midprice.csv");
        out << "time,mid_ticks\n";
        for (std::size_t i = 0; i < mid.mid.size(); ++i)
            out << fmt_int(mid.start + static_cast<NanoTime>(i) * mid.step) << ','
                << fmt_double(mid.mid[i]) << '\n';
    }
    {
        std::ofstream out(dir + "/trades.csv");
        out << "time,price_ticks,volume,buy_id,sell_id\n";
        for (const auto& trade : run.trades)
            out << fmt_int(trade.timestamp) << ',' << fmt_int(trade.price) << ','
                << fmt_int(trade.volume) << ',' << fmt_int(static_cast<std::int64_t>(trade.buy_id))
                << ',' << fmt_int(static_cast<std::int64_t>(trade.sell_id)) << '\n';
    }
}

synth::FlowStats cmd_make_sample(const SampleCmdConfig& cfg) {
    std::vector<data::LobsterEvent> events;
    const synth::FlowStats stats =
        synth::generate_flow(cfg.flow, cfg.seed, cfg.session_start, cfg.orders, events);
    fs::create_directories(cfg.out_dir);
    data::write_lobster(events, cfg.out_dir + "/messages.csv", cfg.out_dir + "/orderbook.csv");

    json info;
    info["seed"] = cfg.seed;
    info["orders"] = stats.new_orders;
    info["deletes"] = stats.deletes;
    info["partial_cancels"] = stats.partial_cancels;
    info["executions"] = stats.executions;
    info["traded_volume"] = stats.traded_volume;
    info["rows"] = events.size();
    info["session_start"] = format_time_of_day(cfg.session_start);
    info["last_message"] = format_time_of_day(events.empty() ? cfg.session_start
                                                             : events.back().msg.time);
    std::ofstream out(cfg.out_dir + "/sample_info.json");
    out << info.dump(2) << '\n';
    return stats;
}

TrainOutcome cmd_train(const TrainCmdConfig& cfg) {
    data::LobsterData parsed = data::parse_lobster(cfg.messages_path, cfg.orderbook_path);
    for (const auto& issue : parsed.issues)
        std::cerr << "parse: " << issue.file << ":" << issue.line << ": " << issue.reason
                  << " (row skipped)\n";
    if (parsed.events.empty()) throw std::runtime_error("train: no usable rows in input");

    const auto annotated = data::annotate_orders(parsed.events, cfg.session_open);
    if (static_cast<int>(annotated.size()) <= cfg.hyper.n_history)
        throw std::runtime_error("train: need more than " +
                                 std::to_string(cfg.hyper.n_history) + " orders, got " +
                                 std::to_string(annotated.size()));

    auto fit = data::fit_scalers(data::feature_columns(annotated));
    for (const auto& warning : fit.warnings) std::cerr << "scalers: " << warning << "\n";

    fs::create_directories(cfg.out_dir);
    TrainOutcome outcome;
    outcome.scaler_path = cfg.out_dir + "/scalers.json";
    outcome.checkpoint_path = cfg.out_dir + "/checkpoint.json";
    outcome.metrics_path = cfg.out_dir + "/metrics.csv";
    fit.scalers.save(outcome.scaler_path);

    const auto pairs = data::build_training_pairs(annotated, fit.scalers, cfg.hyper.n_history);

    gan::TrainConfig tcfg = cfg.train;
    tcfg.checkpoint_path = outcome.checkpoint_path;
    tcfg.scaler_ref = "scalers.json";
    tcfg.verbose = true;

    gan::TrainResult result = gan::train(pairs, cfg.hyper, tcfg);
    gan::save_checkpoint(outcome.checkpoint_path, cfg.hyper, result.gen, result.critic, tcfg);
    gan::write_metrics_csv(outcome.metrics_path, result.history);
    outcome.history = result.history;

    const auto& last = result.history.back();
    std::cout << "trained " << tcfg.epochs << " epochs on " << pairs.size()
              << " pairs; final ks(price,volume,direction,time) = " << fmt_double(last.ks[0])
              << "," << fmt_double(last.ks[1]) << "," << fmt_double(last.ks[2]) << ","
              << fmt_double(last.ks[3]) << "\n";
    return outcome;
}

namespace {

void echo_config(const std::string& out_dir, const json& j) {
    fs::create_directories(out_dir);
    std::ofstream out(out_dir + "/config_echo.json");
    out << j.dump(2) << '\n';
}

json sim_config_json(const SimConfig& cfg) {
    json j;
    j["symbol"] = cfg.symbol;
    j["session"] = {{"start", format_time_of_day(cfg.session_start)},
                    {"end", format_time_of_day(cfg.session_end)}};
    j["data"] = {{"messages", cfg.messages_path}, {"orderbook", cfg.orderbook_path}};
    j["world"] = {{"kind", cfg.world_kind},
                  {"checkpoint", cfg.checkpoint_path},
                  {"warmup_minutes", static_cast<double>(cfg.warmup) / kNsPerMin},
                  {"order_ttl_minutes", static_cast<double>(cfg.order_ttl) / kNsPerMin}};
    j["agents"] = json::array();
    for (const auto& pov : cfg.pov_agents)
        j["agents"].push_back({{"type", "pov"},
                               {"lambda", pov.lambda},
                               {"wakeup_seconds", static_cast<double>(pov.wakeup_period) / kNsPerSec},
                               {"direction", pov.direction == lob::Side::Buy ? "buy" : "sell"},
                               {"target_shares", pov.target},
                               {"start", format_time_of_day(pov.start)},
                               {"end", format_time_of_day(pov.end)}});
    j["seeds"] = cfg.seeds;
    j["out_dir"] = cfg.out_dir;
    return j;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

std::vector<std::string> cmd_simulate(const SimConfig& cfg) {
    const WorldInputs inputs = load_world_inputs(cfg);
    echo_config(cfg.out_dir, sim_config_json(cfg));

    std::vector<std::string> dirs;
    for (const std::uint64_t seed : cfg.seeds) {
        const RunOutput run = run_simulation(cfg, inputs, seed, /*include_pov=*/true);
        const std::string dir = cfg.out_dir + "/seed_" + std::to_string(seed);
        write_run_dir(dir, run, cfg.session_start, cfg.session_end);

        json info;
        info["seed"] = seed;
        info["events_delivered"] = run.event_log.size();
        info["orders_logged"] = run.order_log.size();
        info["trades"] = run.trades.size();
        info["traded_volume"] = run.endogenous_exec_volume;
        info["cancels_not_found"] = run.cancels_not_found;
        if (run.replay_counters) {
            info["replay"] = {{"adds", run.replay_counters->adds},
                              {"cancels", run.replay_counters->cancels},
                              {"unknown_cancels", run.replay_counters->unknown_cancels},
                              {"historical_exec_volume",
                               run.replay_counters->historical_exec_volume},
                              {"historical_exec_messages",
                               run.replay_counters->historical_exec_messages},
                              {"endogenous_exec_volume", run.endogenous_exec_volume}};
        }
        if (cfg.world_kind == "cgan") info["generated_orders"] = run.world_generated;
        if (!cfg.pov_agents.empty()) info["pov_transacted"] = run.pov_transacted;
        std::ofstream out(dir + "/run_info.json");
        out << info.dump(2) << '\n';
        dirs.push_back(dir);
    }
    return dirs;
}

ImpactResult cmd_impact(const ImpactCmdConfig& cfg) {
    const WorldInputs inputs = load_world_inputs(cfg.sim);
    json echo = sim_config_json(cfg.sim);
    echo["impact"] = {{"lambdas", cfg.lambdas},
                      {"grid_seconds", static_cast<double>(cfg.grid) / kNsPerSec},
                      {"measure_start", format_time_of_day(cfg.measure_start)},
                      {"measure_end", format_time_of_day(cfg.measure_end)}};
    echo_config(cfg.sim.out_dir, echo);

    ImpactResult result;
    result.grid = cfg.grid;

    // one baseline per seed, shared across every lambda
    std::vector<stats::PriceSeries> baselines;
    baselines.reserve(cfg.sim.seeds.size());
    for (const std::uint64_t seed : cfg.sim.seeds) {
        const RunOutput run = run_simulation(cfg.sim, inputs, seed, /*include_pov=*/false);
        const std::string dir = cfg.sim.out_dir + "/baseline/seed_" + std::to_string(seed);
        write_run_dir(dir, run, cfg.sim.session_start, cfg.sim.session_end);
        baselines.push_back(run_mid_series(run, cfg.measure_start, cfg.measure_end, cfg.grid));
    }
    result.grid_start = baselines.front().start;

    for (const double lambda : cfg.lambdas) {
        std::vector<std::vector<double>> diffs; // per seed, per grid point
        std::size_t grid_len = baselines.front().mid.size();
        for (std::size_t s = 0; s < cfg.sim.seeds.size(); ++s) {
            const std::uint64_t seed = cfg.sim.seeds[s];
            const RunOutput run =
                run_simulation(cfg.sim, inputs, seed, /*include_pov=*/true, lambda);
            const stats::PriceSeries with_pov =
                run_mid_series(run, cfg.measure_start, cfg.measure_end, cfg.grid);
            const stats::PriceSeries& base = baselines[s];

            std::vector<double> d;
            const std::size_t n = std::min(base.mid.size(), with_pov.mid.size());
            grid_len = std::min(grid_len, n);
            d.reserve(n);
            for (std::size_t i = 0; i < n; ++i)
                d.push_back((with_pov.mid[i] - base.mid[i]) / base.mid[i]);
            diffs.push_back(std::move(d));
        }

        ImpactLambdaResult lambda_result;
        lambda_result.lambda = lambda;
        std::vector<double> values(cfg.sim.seeds.size());
        for (std::size_t i = 0; i < grid_len; ++i) {
            for (std::size_t s = 0; s < diffs.size(); ++s) values[s] = diffs[s][i];
            std::sort(values.begin(), values.end());
            ImpactBand band;
            band.time = result.grid_start + static_cast<NanoTime>(i) * cfg.grid;
            band.q05 = quantile_sorted(values, 0.05);
            band.q25 = quantile_sorted(values, 0.25);
            band.median = quantile_sorted(values, 0.50);
            band.q75 = quantile_sorted(values, 0.75);
            band.q95 = quantile_sorted(values, 0.95);
            lambda_result.bands.push_back(band);
        }
        result.per_lambda.push_back(std::move(lambda_result));
    }

    // artifacts: one csv per lambda plus a combined report
    json report;
    report["grid_seconds"] = static_cast<double>(cfg.grid) / kNsPerSec;
    report["seeds"] = cfg.sim.seeds;
    report["lambdas"] = cfg.lambdas;
    for (const auto& lambda_result : result.per_lambda) {
        char name[64];
        std::snprintf(name, sizeof(name), "impact_lambda_%g.csv", lambda_result.lambda);
        std::ofstream out(cfg.sim.out_dir + "/" + name);
        out << "time_ns,time,median,q25,q75,q05,q95\n";
        json bands = json::array();
        for (const auto& band : lambda_result.bands) {
            out << fmt_int(band.time) << ',' << format_time_of_day(band.time) << ','
                << fmt_double(band.median) << ',' << fmt_double(band.q25) << ','
                << fmt_double(band.q75) << ',' << fmt_double(band.q05) << ','
                << fmt_double(band.q95) << '\n';
            bands.push_back({{"time_ns", band.time},
                             {"median", band.median},
                             {"q25", band.q25},
                             {"q75", band.q75},
                             {"q05", band.q05},
                             {"q95", band.q95}});
        }
        report["per_lambda"].push_back(
            {{"lambda", lambda_result.lambda}, {"bands", std::move(bands)}});
    }
    std::ofstream out(cfg.sim.out_dir + "/impact_report.json");
    out << report.dump() << '\n';
    return result;
}

namespace {

struct TraceSeries {
    std::string id;
    stats::PriceSeries series;
    std::vector<double> volumes;
};

TraceSeries load_trace(const RealismTraceSpec& spec, NanoTime grid) {
    TraceSeries trace;
    trace.id = spec.id;
    std::vector<std::pair<NanoTime, double>> observations;
    std::vector<std::pair<NanoTime, double>> trade_volumes;

    if (!spec.dir.empty()) {
        std::ifstream mid_in(spec.dir + "/midprice.csv");
        if (!mid_in) throw std::runtime_error("cannot open " + spec.dir + "/midprice.csv");
        std::string line;
        std::getline(mid_in, line); // header
        while (std::getline(mid_in, line)) {
            const auto fields = split_csv_line(line);
            if (fields.size() != 2) continue;
            std::int64_t t = 0;
            double mid = 0;
            if (parse_i64(fields[0], t) && parse_f64(fields[1], mid))
                observations.emplace_back(t, mid);
        }
        std::ifstream trade_in(spec.dir + "/trades.csv");
        if (trade_in) {
            std::getline(trade_in, line);
            while (std::getline(trade_in, line)) {
                const auto fields = split_csv_line(line);
                if (fields.size() != 5) continue;
                std::int64_t t = 0, volume = 0;
                if (parse_i64(fields[0], t) && parse_i64(fields[2], volume))
                    trade_volumes.emplace_back(t, static_cast<double>(volume));
            }
        }
    } else {
        const data::LobsterData parsed =
            data::parse_lobster(spec.messages_path, spec.orderbook_path);
        for (const auto& ev : parsed.events) {
            if (const auto mid = ev.book.mid()) observations.emplace_back(ev.msg.time, mid->ticks());
            if (ev.msg.type == data::kExecuteVisible || ev.msg.type == data::kExecuteHidden)
                trade_volumes.emplace_back(ev.msg.time, static_cast<double>(ev.msg.size));
        }
    }
    if (observations.empty()) throw std::runtime_error("trace '" + spec.id + "' has no mid-prices");

    const NanoTime start = observations.front().first;
    const NanoTime end = observations.back().first;
    trace.series = stats::resample_locf(observations, start, end, grid);

    if (!trace.series.mid.empty()) {
        trace.volumes.assign(trace.series.mid.size(), 0.0);
        for (const auto& [t, volume] : trade_volumes) {
            if (t <= trace.series.start) continue;
            const std::size_t bucket =
                static_cast<std::size_t>((t - trace.series.start - 1) / grid);
            if (bucket < trace.volumes.size()) trace.volumes[bucket] += volume;
        }
    }
    return trace;
}

} // namespace

std::vector<stats::StylizedFactsReport> cmd_realism(const RealismCmdConfig& cfg) {
    stats::ReportOptions opt;
    opt.max_lag = cfg.max_lag;
    opt.kurtosis_dts = cfg.kurtosis_dts;
    opt.squared_clustering = cfg.squared_clustering;

    std::vector<TraceSeries> traces;
    std::vector<stats::StylizedFactsReport> reports;
    for (const auto& spec : cfg.traces) {
        TraceSeries trace = load_trace(spec, cfg.grid);
        reports.push_back(
            stats::compute_report(trace.id, trace.series, trace.volumes, opt));
        traces.push_back(std::move(trace));
    }

    fs::create_directories(cfg.out_dir);
    {
        json combined = json::array();
        for (const auto& report : reports) combined.push_back(json::parse(report_to_json(report)));
        std::ofstream out(cfg.out_dir + "/realism_report.json");
        out << combined.dump(2) << '\n';
    }

    auto write_curve = [&](const std::string& name,
                           auto accessor) {
        std::ofstream out(cfg.out_dir + "/" + name);
        out << "tau";
        for (const auto& report : reports) out << ',' << report.trace_id;
        out << '\n';
        for (int tau = 1; tau <= cfg.max_lag; ++tau) {
            out << tau;
            for (const auto& report : reports) {
                const auto& curve = accessor(report);
                const auto& v = curve[tau - 1];
                out << ',' << (v ? fmt_double(*v) : std::string(""));
            }
            out << '\n';
        }
    };
    write_curve("autocorrelation.csv",
                [](const stats::StylizedFactsReport& r) -> const auto& { return r.autocorr; });
    write_curve("volatility_clustering.csv",
                [](const stats::StylizedFactsReport& r) -> const auto& { return r.clustering; });

    {
        std::ofstream out(cfg.out_dir + "/excess_kurtosis.csv");
        out << "dt_steps";
        for (const auto& report : reports) out << ',' << report.trace_id;
        out << '\n';
        for (std::size_t i = 0; i < cfg.kurtosis_dts.size(); ++i) {
            out << cfg.kurtosis_dts[i];
            for (const auto& report : reports) {
                const auto& v = report.kurtosis[i];
                out << ',' << (v ? fmt_double(*v) : std::string("skipped"));
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(cfg.out_dir + "/volume_volatility.csv");
        out << "trace,correlation\n";
        for (const auto& report : reports)
            out << report.trace_id << ','
                << (report.volume_volatility ? fmt_double(*report.volume_volatility)
                                             : std::string("undefined"))
                << '\n';
    }
    return reports;
}

} // namespace msim::cli
