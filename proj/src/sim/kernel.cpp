#include "msim/sim/kernel.hpp"

#include <sstream>
#include <stdexcept>

#include "msim/util/csv.hpp"

namespace msim::sim {

Kernel::Kernel(KernelConfig cfg) : config_(cfg), clock_(cfg.start_time) {
    if (cfg.start_time >= cfg.end_time)
        throw std::invalid_argument("kernel: start_time must precede end_time");
}

AgentId Kernel::register_agent(std::shared_ptr<Agent> agent) {
    if (started_) throw std::logic_error("kernel: cannot register agents after run start");
    const AgentId id = static_cast<AgentId>(agents_.size());
    agent->id_ = id;
    agent->rng_ = Rng(config_.master_seed, static_cast<std::uint64_t>(id));
    if (agent->is_exchange()) {
        if (exchange_id_ >= 0) throw std::logic_error("kernel: exchange already registered");
        exchange_id_ = id;
    }
    agents_.push_back(std::move(agent));
    return id;
}

void Kernel::schedule(NanoTime fire_time, AgentId recipient, Payload payload) {
    if (fire_time < clock_)
        throw std::invalid_argument("kernel: refusing past-dated event at t=" +
                                    std::to_string(fire_time) + " (now " +
                                    std::to_string(clock_) + ")");
    if (recipient < 0 || recipient >= static_cast<AgentId>(agents_.size()))
        throw std::invalid_argument("kernel: unknown recipient agent");
    Event ev;
    ev.fire_time = fire_time;
    ev.priority = (recipient == exchange_id_) ? 0 : 1;
    ev.sequence = next_sequence_++;
    ev.recipient = recipient;
    ev.payload = std::move(payload);
    queue_.push(std::move(ev));
}

void Kernel::run() {
    if (exchange_id_ < 0) throw std::logic_error("kernel: no exchange agent registered");
    started_ = true;
    running_ = true;
    for (auto& agent : agents_) agent->on_start(*this);

    while (!queue_.empty()) {
        const Event ev = queue_.top();
        if (ev.fire_time > config_.end_time) break;
        queue_.pop();
        clock_ = ev.fire_time;
        log_.push_back(ev);
        ++delivered_;
        try {
            agents_[ev.recipient]->on_event(*this, ev);
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "agent " << ev.recipient << " failed handling " << payload_kind(ev.payload)
                << " at t=" << ev.fire_time << " (seq " << ev.sequence << "): " << e.what();
            throw std::runtime_error(msg.str());
        }
    }
    running_ = false;
}

const char* payload_kind(const Payload& p) {
    struct Visitor {
        const char* operator()(const Wakeup&) const { return "wakeup"; }
        const char* operator()(const SubmitOrderMsg&) const { return "submit"; }
        const char* operator()(const CancelOrderMsg&) const { return "cancel"; }
        const char* operator()(const MarketDataRequest&) const { return "mdreq"; }
        const char* operator()(const MarketDataReply&) const { return "mdreply"; }
        const char* operator()(const ExecutionReport&) const { return "exec"; }
        const char* operator()(const ExpireOrder&) const { return "expire"; }
        const char* operator()(const CancelAck&) const { return "cancel_ack"; }
    };
    return std::visit(Visitor{}, p);
}

namespace {

std::string view_fields(const BookView& v) {
    std::string s;
    s += v.best_bid ? fmt_int(v.best_bid->price) + "," + fmt_int(v.best_bid->volume) : ",";
    s += ",";
    s += v.best_ask ? fmt_int(v.best_ask->price) + "," + fmt_int(v.best_ask->volume) : ",";
    s += ",";
    s += v.mid ? fmt_int(v.mid->half_ticks) : "";
    s += "," + fmt_int(v.cumulative_traded);
    return s;
}

} // namespace

std::string payload_fields(const Payload& p) {
    struct Visitor {
        std::string operator()(const Wakeup& w) const { return fmt_int(w.tag); }
        std::string operator()(const SubmitOrderMsg& m) const {
            return fmt_int(static_cast<std::int64_t>(m.order.id)) + "," +
                   fmt_int(lob::sign(m.order.side)) + "," + fmt_int(m.order.price) + "," +
                   fmt_int(m.order.volume) + "," + (m.order.marketable_only ? "1" : "0") + "," +
                   fmt_int(m.ttl);
        }
        std::string operator()(const CancelOrderMsg& m) const {
            return fmt_int(static_cast<std::int64_t>(m.order_id)) + "," +
                   (m.volume ? fmt_int(*m.volume) : std::string("all"));
        }
        std::string operator()(const MarketDataRequest& m) const { return fmt_int(m.depth); }
        std::string operator()(const MarketDataReply& m) const { return view_fields(m.view); }
        std::string operator()(const ExecutionReport& r) const {
            return fmt_int(static_cast<std::int64_t>(r.order_id)) + "," +
                   fmt_int(static_cast<int>(r.reject)) + "," + fmt_int(r.executed) + "," +
                   fmt_int(r.rested) + "," + fmt_int(r.discarded) + "," + view_fields(r.post);
        }
        std::string operator()(const ExpireOrder& e) const {
            return fmt_int(static_cast<std::int64_t>(e.order_id));
        }
        std::string operator()(const CancelAck& a) const {
            return fmt_int(static_cast<std::int64_t>(a.order_id)) + "," +
                   (a.found ? "1" : "0") + "," + fmt_int(a.cancelled);
        }
    };
    return std::visit(Visitor{}, p);
}

void write_event_log_csv(std::ostream& os, const std::vector<Event>& log) {
    os << "time,agent_id,event_kind,payload\n";
    for (const Event& ev : log) {
        os << fmt_int(ev.fire_time) << ',' << fmt_int(ev.recipient) << ','
           << payload_kind(ev.payload) << ',' << payload_fields(ev.payload) << '\n';
    }
}

} // namespace msim::sim
