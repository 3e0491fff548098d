#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>
#include <sstream>

#include "msim/sim/exchange_agent.hpp"
#include "msim/sim/kernel.hpp"

using namespace msim;
using namespace msim::sim;

namespace {

// Minimal scripted agent: wakes once, optionally schedules follow-ups.
class ScriptAgent : public Agent {
public:
    std::vector<std::pair<NanoTime, int>> received; // (time, tag)
    std::function<void(Kernel&, const Event&)> handler;

    void on_event(Kernel& kernel, const Event& ev) override {
        if (const auto* wake = std::get_if<Wakeup>(&ev.payload))
            received.emplace_back(ev.fire_time, wake->tag);
        if (handler) handler(kernel, ev);
    }
};

KernelConfig cfg(NanoTime start = 0, NanoTime end = 1000, std::uint64_t seed = 42) {
    return KernelConfig{start, end, seed, 0};
}

} // namespace

TEST_CASE("agents get ids in registration order") {
    Kernel kernel(cfg());
    auto exchange = std::make_shared<ExchangeAgent>();
    auto a = std::make_shared<ScriptAgent>();
    auto b = std::make_shared<ScriptAgent>();
    CHECK(kernel.register_agent(exchange) == 0);
    CHECK(kernel.register_agent(a) == 1);
    CHECK(kernel.register_agent(b) == 2);
}

TEST_CASE("per-agent rng streams depend only on (seed, id)") {
    auto draws = [](std::uint64_t seed, int agent_count, int agent) {
        Kernel kernel(cfg(0, 10, seed));
        kernel.register_agent(std::make_shared<ExchangeAgent>());
        std::vector<std::shared_ptr<ScriptAgent>> agents;
        for (int i = 0; i < agent_count; ++i) {
            agents.push_back(std::make_shared<ScriptAgent>());
            kernel.register_agent(agents.back());
        }
        std::vector<double> out;
        for (int i = 0; i < 8; ++i) out.push_back(agents[agent]->rng().uniform());
        return out;
    };
    // adding one more agent later must not perturb agent 1's stream
    CHECK(draws(7, 1, 0) == draws(7, 3, 0));
    CHECK(draws(7, 2, 1) == draws(7, 3, 1));
    CHECK(draws(7, 2, 0) != draws(8, 2, 0));
}

TEST_CASE("registration after run start is rejected") {
    Kernel kernel(cfg());
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    kernel.run();
    CHECK_THROWS_AS(kernel.register_agent(std::make_shared<ScriptAgent>()), std::logic_error);
}

TEST_CASE("same-time events are delivered in schedule order") {
    Kernel kernel(cfg());
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    auto agent = std::make_shared<ScriptAgent>();
    kernel.register_agent(agent);
    kernel.schedule(5, agent->id(), Wakeup{1});
    kernel.schedule(5, agent->id(), Wakeup{2});
    kernel.schedule(3, agent->id(), Wakeup{0});
    kernel.run();
    REQUIRE(agent->received.size() == 3);
    CHECK(agent->received[0] == std::pair<NanoTime, int>{3, 0});
    CHECK(agent->received[1] == std::pair<NanoTime, int>{5, 1});
    CHECK(agent->received[2] == std::pair<NanoTime, int>{5, 2});
}

TEST_CASE("exchange-bound events outrank agent events at equal times") {
    Kernel kernel(cfg());
    auto exchange = std::make_shared<ExchangeAgent>();
    kernel.register_agent(exchange);
    auto agent = std::make_shared<ScriptAgent>();
    kernel.register_agent(agent);

    // schedule the agent wakeup first, then an exchange request at the same time
    kernel.schedule(5, agent->id(), Wakeup{1});
    kernel.schedule(5, exchange->id(), MarketDataRequest{agent->id(), 1});
    kernel.run();

    const auto& log = kernel.log();
    REQUIRE(log.size() >= 2);
    CHECK(log[0].recipient == exchange->id()); // priority 0 wins despite later sequence
    CHECK(log[1].recipient == agent->id());
}

TEST_CASE("events after end_time are accepted but never delivered") {
    Kernel kernel(cfg(0, 100));
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    auto agent = std::make_shared<ScriptAgent>();
    kernel.register_agent(agent);
    kernel.schedule(100, agent->id(), Wakeup{1});
    kernel.schedule(101, agent->id(), Wakeup{2}); // accepted, beyond the horizon
    kernel.run();
    REQUIRE(agent->received.size() == 1);
    CHECK(agent->received[0].second == 1);
}

TEST_CASE("past-dated events are rejected") {
    Kernel kernel(cfg(50, 100));
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    auto agent = std::make_shared<ScriptAgent>();
    kernel.register_agent(agent);
    CHECK_THROWS_AS(kernel.schedule(49, agent->id(), Wakeup{}), std::invalid_argument);
}

TEST_CASE("no events means an empty log and immediate termination") {
    Kernel kernel(cfg());
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    kernel.run();
    CHECK(kernel.log().empty());
}

TEST_CASE("single wakeup that schedules nothing gives a one-event log") {
    Kernel kernel(cfg());
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    auto agent = std::make_shared<ScriptAgent>();
    kernel.register_agent(agent);
    kernel.schedule(1, agent->id(), Wakeup{3});
    kernel.run();
    CHECK(kernel.log().size() == 1);
}

TEST_CASE("agent handler failure aborts with the offending event identified") {
    Kernel kernel(cfg());
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    auto agent = std::make_shared<ScriptAgent>();
    agent->handler = [](Kernel&, const Event&) { throw std::runtime_error("boom"); };
    kernel.register_agent(agent);
    kernel.schedule(9, agent->id(), Wakeup{});
    try {
        kernel.run();
        FAIL("expected abort");
    } catch (const std::runtime_error& e) {
        const std::string what = e.what();
        CHECK(what.find("agent 1") != std::string::npos);
        CHECK(what.find("t=9") != std::string::npos);
        CHECK(what.find("boom") != std::string::npos);
    }
}

namespace {

// Two agents trading through the exchange; used for the determinism check.
class NoiseTrader : public Agent {
public:
    void on_start(Kernel& kernel) override { kernel.schedule(1, id(), Wakeup{}); }
    void on_event(Kernel& kernel, const Event& ev) override {
        if (!std::holds_alternative<Wakeup>(ev.payload)) return;
        lob::Order order;
        order.id = (static_cast<lob::OrderId>(id()) << 32) | ++count_;
        order.side = rng().bernoulli(0.5) ? lob::Side::Buy : lob::Side::Sell;
        order.price = 1000 + rng().uniform_int(-10, 10);
        order.volume = rng().uniform_int(1, 50);
        kernel.send(kernel.exchange_id(), SubmitOrderMsg{id(), order, 0});
        if (kernel.now() + 7 <= kernel.config().end_time)
            kernel.schedule(kernel.now() + 7, id(), Wakeup{});
    }

private:
    std::uint64_t count_ = 0;
};

std::string run_and_serialize(std::uint64_t seed) {
    Kernel kernel(cfg(0, 5000, seed));
    kernel.register_agent(std::make_shared<ExchangeAgent>());
    kernel.register_agent(std::make_shared<NoiseTrader>());
    kernel.register_agent(std::make_shared<NoiseTrader>());
    kernel.run();
    std::ostringstream os;
    write_event_log_csv(os, kernel.log());
    return os.str();
}

} // namespace

TEST_CASE("identical config and seed give byte-identical event logs") {
    const std::string a = run_and_serialize(11);
    const std::string b = run_and_serialize(11);
    CHECK(a == b);
    CHECK(a.size() > 1000);
    const std::string c = run_and_serialize(12);
    CHECK(a != c);
}

TEST_CASE("exchange auto-expires orders with a ttl") {
    Kernel kernel(cfg(0, 1000));
    auto exchange = std::make_shared<ExchangeAgent>();
    kernel.register_agent(exchange);
    auto agent = std::make_shared<ScriptAgent>();
    agent->handler = [&](Kernel& k, const Event& ev) {
        if (std::holds_alternative<Wakeup>(ev.payload)) {
            lob::Order order;
            order.id = 1;
            order.side = lob::Side::Buy;
            order.price = 500;
            order.volume = 10;
            k.send(k.exchange_id(), SubmitOrderMsg{agent->id(), order, /*ttl=*/100});
        }
    };
    kernel.register_agent(agent);
    kernel.schedule(10, agent->id(), Wakeup{});
    kernel.run();
    CHECK(!exchange->book().best_bid()); // expired at t=110
    bool saw_expire = false;
    for (const auto& rec : exchange->order_log())
        if (rec.event == "expire" && rec.time == 110) saw_expire = true;
    CHECK(saw_expire);
}

TEST_CASE("market data reply reflects same-time order flow") {
    // an order submitted at t=5 must be visible to a market-data request
    // scheduled later in the same instant
    Kernel kernel(cfg(0, 100));
    auto exchange = std::make_shared<ExchangeAgent>();
    kernel.register_agent(exchange);

    auto trader = std::make_shared<ScriptAgent>();
    std::optional<BookView> seen;
    trader->handler = [&](Kernel& k, const Event& ev) {
        if (std::holds_alternative<Wakeup>(ev.payload)) {
            lob::Order order;
            order.id = 7;
            order.side = lob::Side::Buy;
            order.price = 900;
            order.volume = 5;
            k.send(k.exchange_id(), SubmitOrderMsg{trader->id(), order, 0});
            k.send(k.exchange_id(), MarketDataRequest{trader->id(), 1});
        } else if (const auto* reply = std::get_if<MarketDataReply>(&ev.payload)) {
            seen = reply->view;
        }
    };
    kernel.register_agent(trader);
    kernel.schedule(5, trader->id(), Wakeup{});
    kernel.run();
    REQUIRE(seen.has_value());
    REQUIRE(seen->best_bid.has_value());
    CHECK(seen->best_bid->price == 900);
}
