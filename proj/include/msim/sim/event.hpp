#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "msim/lob/types.hpp"
#include "msim/util/time.hpp"

namespace msim::sim {

using AgentId = int;

// Value snapshot of the top of book handed out with market-data replies and
// execution reports. Cheap to copy; safe to keep across events.
struct BookView {
    std::optional<lob::SnapshotLevel> best_bid;
    std::optional<lob::SnapshotLevel> best_ask;
    std::optional<lob::MidPrice> mid;
    lob::Volume cumulative_traded = 0;
    NanoTime time = 0;
};

struct Wakeup {
    int tag = 0;
};

struct SubmitOrderMsg {
    AgentId sender = -1;
    lob::Order order;
    NanoTime ttl = 0; // 0 = rests until cancelled
};

struct CancelOrderMsg {
    AgentId sender = -1;
    lob::OrderId order_id = 0;
    std::optional<lob::Volume> volume; // absent = cancel all
};

struct MarketDataRequest {
    AgentId sender = -1;
    int depth = 1;
};

struct MarketDataReply {
    BookView view;
};

struct ExecutionReport {
    lob::OrderId order_id = 0;
    lob::RejectReason reject = lob::RejectReason::None;
    lob::Volume executed = 0;
    lob::Volume rested = 0;
    lob::Volume discarded = 0;
    BookView post; // book state once this order finished matching
};

struct ExpireOrder {
    lob::OrderId order_id = 0;
};

struct CancelAck {
    lob::OrderId order_id = 0;
    bool found = false;
    lob::Volume cancelled = 0;
};

using Payload = std::variant<Wakeup, SubmitOrderMsg, CancelOrderMsg, MarketDataRequest,
                             MarketDataReply, ExecutionReport, ExpireOrder, CancelAck>;

struct Event {
    NanoTime fire_time = 0;
    int priority = 1; // 0 = exchange-bound, 1 = everyone else
    std::uint64_t sequence = 0;
    AgentId recipient = -1;
    Payload payload;
};

// Total order on events; sequence breaks every tie deterministically.
struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.fire_time != b.fire_time) return a.fire_time > b.fire_time;
        if (a.priority != b.priority) return a.priority > b.priority;
        return a.sequence > b.sequence;
    }
};

const char* payload_kind(const Payload& p);
std::string payload_fields(const Payload& p);

} // namespace msim::sim
