#pragma once

#include <unordered_map>
#include <vector>

#include "msim/data/lobster.hpp"
#include "msim/sim/exchange_agent.hpp"

namespace msim::agents {

// Non-reactive baseline world: re-submits the historical message stream at
// its recorded timestamps. Execution messages (types 4-5) are not replayed;
// the matcher regenerates those trades when the crossing adds arrive, and a
// divergence counter tracks how well the two agree.
class ReplayWorldAgent : public sim::Agent {
public:
    struct Counters {
        std::int64_t adds = 0;
        std::int64_t cancels = 0;
        std::int64_t unknown_cancels = 0; // ids never seen in this session
        std::int64_t historical_exec_volume = 0;
        std::int64_t historical_exec_messages = 0;
    };

    explicit ReplayWorldAgent(std::vector<data::LobsterEvent> stream);

    void on_start(sim::Kernel& kernel) override;
    void on_event(sim::Kernel& kernel, const sim::Event& ev) override;

    const Counters& counters() const { return counters_; }
    bool exhausted() const { return cursor_ >= stream_.size(); }

private:
    void process_one(sim::Kernel& kernel);
    void schedule_next(sim::Kernel& kernel);

    std::vector<data::LobsterEvent> stream_;
    std::size_t cursor_ = 0;
    std::unordered_map<std::uint64_t, lob::OrderId> id_map_;
    std::uint64_t order_counter_ = 0;
    Counters counters_;
};

} // namespace msim::agents
