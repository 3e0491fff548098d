#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "msim/lob/order_book.hpp"
#include "msim/util/rng.hpp"
#include "oracle_book.hpp"

using namespace msim;
using namespace msim::lob;

namespace {

Order mk(OrderId id, Side side, Ticks price, Volume volume, bool marketable = false) {
    Order o;
    o.id = id;
    o.side = side;
    o.price = price;
    o.volume = volume;
    o.marketable_only = marketable;
    return o;
}

} // namespace

TEST_CASE("marketable buy fills at the resting ask price") {
    OrderBook book;
    REQUIRE(book.submit(mk(7, Side::Sell, 1000000, 100)).accepted());

    const auto result = book.submit(mk(8, Side::Buy, 1000100, 50));
    REQUIRE(result.trades.size() == 1);
    CHECK(result.trades[0].volume == 50);
    CHECK(result.trades[0].price == 1000000); // resting order's limit, not the taker's
    CHECK(result.trades[0].buy_id == 8);
    CHECK(result.trades[0].sell_id == 7);
    CHECK(result.rested == 0);
    CHECK(book.best_ask()->volume == 50);
}

TEST_CASE("non-marketable order rests as best bid") {
    OrderBook book;
    const auto result = book.submit(mk(1, Side::Buy, 999900, 10));
    CHECK(result.trades.empty());
    CHECK(result.rested == 10);
    REQUIRE(book.best_bid());
    CHECK(book.best_bid()->price == 999900);
    CHECK(book.best_bid()->volume == 10);
}

TEST_CASE("FIFO within a price level") {
    OrderBook book;
    REQUIRE(book.submit(mk(1, Side::Sell, 1000000, 30)).accepted()); // A first
    REQUIRE(book.submit(mk(2, Side::Sell, 1000000, 30)).accepted()); // B second

    const auto result = book.submit(mk(3, Side::Buy, 1000000, 40));
    REQUIRE(result.trades.size() == 2);
    CHECK(result.trades[0].sell_id == 1);
    CHECK(result.trades[0].volume == 30);
    CHECK(result.trades[1].sell_id == 2);
    CHECK(result.trades[1].volume == 10);
    CHECK(book.best_ask()->volume == 20);
}

TEST_CASE("rejections: duplicate id and bad volume") {
    OrderBook book;
    REQUIRE(book.submit(mk(1, Side::Buy, 100, 10)).accepted());
    CHECK(book.submit(mk(1, Side::Buy, 101, 10)).reject == RejectReason::DuplicateId);
    CHECK(book.submit(mk(2, Side::Buy, 100, 0)).reject == RejectReason::BadVolume);
    CHECK(book.submit(mk(3, Side::Buy, 0, 5)).reject == RejectReason::BadPrice);
}

TEST_CASE("marketable-only residual is discarded, not rested") {
    OrderBook book;
    REQUIRE(book.submit(mk(1, Side::Sell, 1000, 40)).accepted());
    const auto result = book.submit(mk(2, Side::Buy, 0, 100, /*marketable=*/true));
    CHECK(result.executed == 40);
    CHECK(result.discarded == 60);
    CHECK(result.rested == 0);
    CHECK(!book.best_bid());
    CHECK(!book.best_ask());
}

TEST_CASE("cancel semantics") {
    OrderBook book;
    REQUIRE(book.submit(mk(1, Side::Buy, 1000, 25)).accepted());

    SUBCASE("partial cancel reduces remaining volume") {
        const auto result = book.cancel(1, 10);
        CHECK(result.found);
        CHECK(result.cancelled == 10);
        CHECK(book.best_bid()->volume == 15);
    }
    SUBCASE("full cancel removes the level") {
        const auto result = book.cancel(1);
        CHECK(result.found);
        CHECK(result.cancelled == 25);
        CHECK(!book.best_bid());
    }
    SUBCASE("unknown id is a counted no-op") {
        const auto result = book.cancel(42);
        CHECK(!result.found);
        CHECK(result.cancelled == 0);
    }
    SUBCASE("cancel more than remaining caps at remaining") {
        const auto result = book.cancel(1, 100);
        CHECK(result.cancelled == 25);
        CHECK(!book.best_bid());
    }
}

TEST_CASE("snapshot: empty book and depth truncation") {
    OrderBook book;
    const auto empty = book.snapshot(20);
    CHECK(empty.bids.empty());
    CHECK(empty.asks.empty());
    CHECK(!mid_price(empty));

    for (int i = 0; i < 25; ++i)
        REQUIRE(book.submit(mk(100 + i, Side::Sell, 1000 + i, 10)).accepted());
    const auto snap = book.snapshot(20);
    REQUIRE(snap.asks.size() == 20);
    CHECK(snap.asks.front().price == 1000); // best first
    CHECK(snap.asks.back().price == 1019);
}

TEST_CASE("mid price cases") {
    OrderBook book;
    REQUIRE(book.submit(mk(1, Side::Buy, 999900, 10)).accepted());
    CHECK(!book.mid()); // one-sided book: undefined, not zero

    REQUIRE(book.submit(mk(2, Side::Sell, 1000100, 10)).accepted());
    REQUIRE(book.mid());
    CHECK(book.mid()->half_ticks == 2000000);
    CHECK(book.mid()->ticks() == doctest::Approx(1000000.0));

    // one-tick spread gives an exact half-tick midpoint
    OrderBook tight;
    REQUIRE(tight.submit(mk(1, Side::Buy, 1000, 10)).accepted());
    REQUIRE(tight.submit(mk(2, Side::Sell, 1001, 10)).accepted());
    CHECK(tight.mid()->half_ticks == 2001);
    CHECK(tight.mid()->ticks() == doctest::Approx(1000.5));
}

TEST_CASE("self-trade is permitted") {
    OrderBook book;
    REQUIRE(book.submit(mk(1, Side::Sell, 1000, 10)).accepted());
    const auto result = book.submit(mk(2, Side::Buy, 1000, 10));
    CHECK(result.trades.size() == 1); // same agent's ids can match freely
}

namespace {

struct OpStreamResult {
    std::vector<Trade> trades;
    LOBSnapshot snapshot;
};

// Replays an identical random operation stream through both books.
void run_oracle_comparison(std::uint64_t seed, int ops) {
    Rng rng(seed, 900);
    OrderBook book;
    testing::NaiveBook oracle;
    std::vector<OrderId> ids;
    OrderId next_id = 1;

    for (int i = 0; i < ops; ++i) {
        const double action = rng.uniform();
        if (action < 0.65 || ids.empty()) {
            Order o;
            o.id = next_id++;
            o.side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
            o.price = 1000 + rng.uniform_int(-40, 40);
            o.volume = rng.uniform_int(1, 200);
            o.marketable_only = rng.bernoulli(0.08);
            o.timestamp = i;
            const auto a = book.submit(o);
            const auto b = oracle.submit(o);
            REQUIRE(a.reject == b.reject);
            REQUIRE(a.executed == b.executed);
            REQUIRE(a.rested == b.rested);
            REQUIRE(a.discarded == b.discarded);
            if (a.rested > 0) ids.push_back(o.id);
        } else {
            const auto pick = static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<std::int64_t>(ids.size()) - 1));
            const OrderId id = ids[pick];
            std::optional<Volume> amount;
            if (rng.bernoulli(0.4)) amount = rng.uniform_int(1, 120);
            const auto a = book.cancel(id, amount);
            const auto b = oracle.cancel(id, amount);
            REQUIRE(a.found == b.found);
            REQUIRE(a.cancelled == b.cancelled);
            if (!amount || !a.found) {
                ids[pick] = ids.back();
                ids.pop_back();
            }
        }

        // never-crossed invariant after every operation
        const auto bid = book.best_bid();
        const auto ask = book.best_ask();
        if (bid && ask) REQUIRE(bid->price < ask->price);
    }

    const auto& trades_a = book.trade_log();
    const auto& trades_b = oracle.trades();
    REQUIRE(trades_a.size() == trades_b.size());
    for (std::size_t i = 0; i < trades_a.size(); ++i) {
        REQUIRE(trades_a[i].buy_id == trades_b[i].buy_id);
        REQUIRE(trades_a[i].sell_id == trades_b[i].sell_id);
        REQUIRE(trades_a[i].price == trades_b[i].price);
        REQUIRE(trades_a[i].volume == trades_b[i].volume);
    }
    REQUIRE(book.snapshot(20) == oracle.snapshot(20));
}

} // namespace

TEST_CASE("oracle equivalence over random operation streams") {
    run_oracle_comparison(1, 10000);
    run_oracle_comparison(2, 10000);
}

TEST_CASE("volume conservation under random submits") {
    Rng rng(7, 901);
    OrderBook book;
    OrderId next_id = 1;
    for (int i = 0; i < 2000; ++i) {
        Order o;
        o.id = next_id++;
        o.side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
        o.price = 500 + rng.uniform_int(-30, 30);
        o.volume = rng.uniform_int(1, 100);
        o.marketable_only = rng.bernoulli(0.1);
        const auto result = book.submit(o);
        REQUIRE(result.executed + result.rested + result.discarded == o.volume);
    }
}

TEST_CASE("determinism: identical streams produce identical trade logs") {
    auto run = [](std::uint64_t seed) {
        Rng rng(seed, 902);
        OrderBook book;
        OrderId next_id = 1;
        for (int i = 0; i < 3000; ++i) {
            Order o;
            o.id = next_id++;
            o.side = rng.bernoulli(0.5) ? Side::Buy : Side::Sell;
            o.price = 700 + rng.uniform_int(-25, 25);
            o.volume = rng.uniform_int(1, 50);
            book.submit(o);
        }
        return book.trade_log();
    };
    const auto a = run(3);
    const auto b = run(3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].buy_id == b[i].buy_id);
        CHECK(a[i].sell_id == b[i].sell_id);
        CHECK(a[i].price == b[i].price);
        CHECK(a[i].volume == b[i].volume);
    }
}
