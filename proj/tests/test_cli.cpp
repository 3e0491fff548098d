#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "msim/cli/commands.hpp"
#include "msim/util/csv.hpp"
#include "msim/util/rng.hpp"

using namespace msim;
using namespace msim::cli;

namespace fs = std::filesystem;

namespace {

std::string work_dir() {
    static const std::string dir = [] {
        const auto d = fs::temp_directory_path() / "msim_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d.string();
    }();
    return dir;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

// One small sample + one tiny trained-ish checkpoint, shared by the cases.
struct Fixture {
    std::string sample_dir;
    std::string model_dir;

    Fixture() {
        sample_dir = work_dir() + "/sample";
        SampleCmdConfig scfg;
        scfg.out_dir = sample_dir;
        scfg.orders = 1500;
        scfg.seed = 3;
        cmd_make_sample(scfg);

        // a real (if short) training run gives the cgan tests a valid checkpoint
        model_dir = work_dir() + "/model";
        TrainCmdConfig tcfg;
        tcfg.messages_path = sample_dir + "/messages.csv";
        tcfg.orderbook_path = sample_dir + "/orderbook.csv";
        tcfg.out_dir = model_dir;
        tcfg.hyper.lstm_hidden = 8;
        tcfg.hyper.conv_channels = 4;
        tcfg.hyper.critic_width = 16;
        tcfg.train.epochs = 1;
        tcfg.train.batch_size = 32;
        tcfg.train.seed = 5;
        tcfg.train.metric_samples = 64;
        cmd_train(tcfg);
    }
};

const Fixture& fixture() {
    static Fixture f;
    return f;
}

std::string sim_config_text(const std::string& world_kind, const std::string& out_dir,
                            bool with_pov, const std::string& extra = "") {
    std::string agents = with_pov ? R"([{"type": "pov", "lambda": 0.25,
        "wakeup_seconds": 60, "direction": "buy", "target_shares": 1000000,
        "start": "09:40:00", "end": "09:50:00"}])"
                                  : "[]";
    return std::string("{") + R"(
      "symbol": "SYN",
      "session": {"start": "09:30:00", "end": "09:55:00"},
      "data": {"messages": ")" +
           fixture().sample_dir + R"(/messages.csv", "orderbook": ")" + fixture().sample_dir +
           R"(/orderbook.csv"},
      "world": {"kind": ")" +
           world_kind + R"(", "checkpoint": ")" + fixture().model_dir +
           R"(/checkpoint.json", "warmup_minutes": 5, "order_ttl_minutes": 3},
      "agents": )" +
           agents + R"(,
      "seeds": [1, 2],
      "out_dir": ")" +
           out_dir + "\"" + extra + "}";
}

} // namespace

TEST_CASE("make-sample emits a parseable pair with the requested order count") {
    const auto& f = fixture();
    const auto parsed = data::parse_lobster(f.sample_dir + "/messages.csv",
                                            f.sample_dir + "/orderbook.csv");
    CHECK(parsed.issues.empty());
    std::int64_t adds = 0;
    for (const auto& ev : parsed.events)
        if (ev.msg.type == data::kNewOrder) ++adds;
    CHECK(adds >= 1500);
    CHECK(fs::exists(f.sample_dir + "/sample_info.json"));
}

TEST_CASE("train writes checkpoint, scalers and metrics that reload cleanly") {
    const auto& f = fixture();
    CHECK(fs::exists(f.model_dir + "/checkpoint.json"));
    CHECK(fs::exists(f.model_dir + "/scalers.json"));
    CHECK(fs::exists(f.model_dir + "/metrics.csv"));

    const auto ckpt = gan::load_checkpoint(f.model_dir + "/checkpoint.json");
    CHECK(ckpt.scaler_ref == "scalers.json");
    const auto scalers = data::ScalerSet::load(f.model_dir + "/scalers.json");
    CHECK(scalers.feature[data::kVolume].box.has_value());

    const std::string metrics = read_file(f.model_dir + "/metrics.csv");
    CHECK(metrics.find("epoch,d_loss,g_loss,ks_price") == 0);
}

TEST_CASE("train config validation fails on a missing book file") {
    CHECK_THROWS_WITH_AS(
        parse_train_config(R"({"data": {"messages": ")" + fixture().sample_dir +
                               R"(/messages.csv", "orderbook": "/nonexistent/b.csv"}})",
                           ""),
        doctest::Contains("does not exist"), std::runtime_error);
}

TEST_CASE("train rerun with the same seed reproduces the metrics csv") {
    const auto& f = fixture();
    TrainCmdConfig tcfg;
    tcfg.messages_path = f.sample_dir + "/messages.csv";
    tcfg.orderbook_path = f.sample_dir + "/orderbook.csv";
    tcfg.hyper.lstm_hidden = 8;
    tcfg.hyper.conv_channels = 4;
    tcfg.hyper.critic_width = 16;
    tcfg.train.epochs = 1;
    tcfg.train.batch_size = 32;
    tcfg.train.seed = 9;
    tcfg.train.metric_samples = 64;

    tcfg.out_dir = work_dir() + "/model_a";
    cmd_train(tcfg);
    tcfg.out_dir = work_dir() + "/model_b";
    cmd_train(tcfg);
    CHECK(read_file(work_dir() + "/model_a/metrics.csv") ==
          read_file(work_dir() + "/model_b/metrics.csv"));
    CHECK(read_file(work_dir() + "/model_a/checkpoint.json") ==
          read_file(work_dir() + "/model_b/checkpoint.json"));
}

TEST_CASE("replay simulate reproduces the historical mid-prices within a tick") {
    const std::string out = work_dir() + "/replay_run";
    const SimConfig cfg = parse_sim_config(sim_config_text("replay", out, false), "");
    const auto dirs = cmd_simulate(cfg);
    REQUIRE(dirs.size() == 2);

    const auto parsed = data::parse_lobster(fixture().sample_dir + "/messages.csv",
                                            fixture().sample_dir + "/orderbook.csv");
    // historical mid on the same 1s grid
    std::vector<std::pair<NanoTime, double>> obs;
    for (const auto& ev : parsed.events)
        if (const auto mid = ev.book.mid()) obs.emplace_back(ev.msg.time, mid->ticks());
    const auto historical =
        stats::resample_locf(obs, cfg.session_start, cfg.session_end, kNsPerSec);

    std::ifstream mid_in(dirs[0] + "/midprice.csv");
    std::string line;
    std::getline(mid_in, line); // header
    std::size_t i = 0;
    std::size_t compared = 0;
    while (std::getline(mid_in, line) && i < historical.mid.size()) {
        const auto fields = split_csv_line(line);
        REQUIRE(fields.size() == 2);
        double mid = 0;
        REQUIRE(parse_f64(fields[1], mid));
        CHECK(std::abs(mid - historical.mid[i]) <= 1.0); // within one tick
        ++i;
        ++compared;
    }
    CHECK(compared > 1000);
}

TEST_CASE("simulate is deterministic: identical config and seed, identical bytes") {
    const SimConfig cfg_a =
        parse_sim_config(sim_config_text("cgan", work_dir() + "/det_a", true), "");
    const SimConfig cfg_b =
        parse_sim_config(sim_config_text("cgan", work_dir() + "/det_b", true), "");
    cmd_simulate(cfg_a);
    cmd_simulate(cfg_b);
    for (const std::string file :
         {"event_log.csv", "orders.csv", "midprice.csv", "trades.csv"}) {
        CHECK(read_file(work_dir() + "/det_a/seed_1/" + file) ==
              read_file(work_dir() + "/det_b/seed_1/" + file));
    }
    // distinct seeds diverge
    CHECK(read_file(work_dir() + "/det_a/seed_1/orders.csv") !=
          read_file(work_dir() + "/det_a/seed_2/orders.csv"));
}

TEST_CASE("config schema errors") {
    CHECK_THROWS_WITH_AS(
        parse_sim_config(sim_config_text("martian", work_dir() + "/x", false), ""),
        doctest::Contains("unknown world kind"), std::runtime_error);

    std::string bad_agent = sim_config_text("replay", work_dir() + "/x", false);
    bad_agent.replace(bad_agent.find("\"agents\": []"), 12,
                      R"("agents": [{"type": "ufo"}])");
    CHECK_THROWS_WITH_AS(parse_sim_config(bad_agent, ""),
                         doctest::Contains("unknown agent type"), std::runtime_error);

    std::string dup_seeds = sim_config_text("replay", work_dir() + "/x", false);
    dup_seeds.replace(dup_seeds.find("\"seeds\": [1, 2]"), 15, R"("seeds": [1, 1])");
    CHECK_THROWS_WITH_AS(parse_sim_config(dup_seeds, ""), doctest::Contains("distinct"),
                         std::runtime_error);
}

TEST_CASE("impact validation: empty lambda list and too few seeds refuse to run") {
    std::string no_lambdas = sim_config_text("replay", work_dir() + "/x", true,
                                             R"(, "impact": {"lambdas": []})");
    CHECK_THROWS_WITH_AS(parse_impact_config(no_lambdas, ""), doctest::Contains("lambdas"),
                         std::runtime_error);

    std::string one_seed = sim_config_text("replay", work_dir() + "/x", true,
                                           R"(, "impact": {"lambdas": [0.25]})");
    one_seed.replace(one_seed.find("\"seeds\": [1, 2]"), 15, R"("seeds": [1])");
    CHECK_THROWS_WITH_AS(parse_impact_config(one_seed, ""), doctest::Contains("2 seeds"),
                         std::runtime_error);
}

TEST_CASE("impact: band ordering holds and the baseline is lambda-independent") {
    const std::string out_a = work_dir() + "/impact_a";
    const std::string out_b = work_dir() + "/impact_b";
    const ImpactCmdConfig cfg_a = parse_impact_config(
        sim_config_text("replay", out_a, true,
                        R"(, "impact": {"lambdas": [0.25], "measure_start": "09:35:00",
                           "measure_end": "09:55:00"})"),
        "");
    const ImpactCmdConfig cfg_b = parse_impact_config(
        sim_config_text("replay", out_b, true,
                        R"(, "impact": {"lambdas": [0.1], "measure_start": "09:35:00",
                           "measure_end": "09:55:00"})"),
        "");

    const ImpactResult result = cmd_impact(cfg_a);
    REQUIRE(result.per_lambda.size() == 1);
    REQUIRE(!result.per_lambda[0].bands.empty());
    for (const auto& band : result.per_lambda[0].bands) {
        CHECK(band.q05 <= band.q25 + 1e-15);
        CHECK(band.q25 <= band.median + 1e-15);
        CHECK(band.median <= band.q75 + 1e-15);
        CHECK(band.q75 <= band.q95 + 1e-15);
    }
    CHECK(fs::exists(out_a + "/impact_lambda_0.25.csv"));
    CHECK(fs::exists(out_a + "/impact_report.json"));

    cmd_impact(cfg_b);
    // the without-POV run may not depend on lambda
    for (int seed = 1; seed <= 2; ++seed) {
        const std::string rel = "/baseline/seed_" + std::to_string(seed) + "/event_log.csv";
        CHECK(read_file(out_a + rel) == read_file(out_b + rel));
    }
}

TEST_CASE("realism: identical traces give identical blocks; gaussian walk is featureless") {
    // craft a long gaussian random-walk trace in simulate's output format
    const std::string trace_dir = work_dir() + "/gauss_trace";
    fs::create_directories(trace_dir);
    {
        std::ofstream mid(trace_dir + "/midprice.csv");
        mid << "time,mid_ticks\n";
        Rng rng(55, 1);
        double log_m = std::log(1e6);
        for (int i = 0; i < 5000; ++i) {
            log_m += 1e-4 * rng.normal();
            mid << fmt_int(34200000000000LL + static_cast<NanoTime>(i) * kNsPerMin) << ','
                << fmt_double(std::exp(log_m)) << '\n';
        }
        std::ofstream trades(trace_dir + "/trades.csv");
        trades << "time,price_ticks,volume,buy_id,sell_id\n";
    }

    RealismCmdConfig cfg;
    cfg.traces = {{"a", trace_dir, "", ""}, {"b", trace_dir, "", ""}};
    cfg.out_dir = work_dir() + "/realism_out";
    const auto reports = cmd_realism(cfg);
    REQUIRE(reports.size() == 2);

    // identical inputs, identical metric blocks
    for (int tau = 0; tau < cfg.max_lag; ++tau) {
        CHECK(reports[0].autocorr[tau] == reports[1].autocorr[tau]);
        CHECK(reports[0].clustering[tau] == reports[1].clustering[tau]);
    }
    CHECK(reports[0].kurtosis == reports[1].kurtosis);

    // near-zero autocorrelation and thin tails for the gaussian walk
    REQUIRE(reports[0].autocorr[0].has_value());
    CHECK(std::abs(*reports[0].autocorr[0]) < 4.0 / std::sqrt(5000.0));
    REQUIRE(reports[0].kurtosis[0].has_value());
    CHECK(std::abs(*reports[0].kurtosis[0]) < 0.4);

    CHECK(fs::exists(cfg.out_dir + "/realism_report.json"));
    CHECK(fs::exists(cfg.out_dir + "/autocorrelation.csv"));
    CHECK(fs::exists(cfg.out_dir + "/excess_kurtosis.csv"));
    CHECK(fs::exists(cfg.out_dir + "/volume_volatility.csv"));
}

TEST_CASE("realism config requires at least two traces and existing files") {
    CHECK_THROWS_WITH_AS(parse_realism_config(R"({"traces": [{"id": "only",
        "dir": "/nonexistent"}]})",
                                              ""),
                         doctest::Contains("at least 2"), std::runtime_error);
    CHECK_THROWS_WITH_AS(parse_realism_config(R"({"traces": [
        {"id": "a", "dir": "/nonexistent"},
        {"id": "b", "dir": "/nonexistent"}]})",
                                              ""),
                         doctest::Contains("does not exist"), std::runtime_error);
}
