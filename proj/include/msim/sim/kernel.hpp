#pragma once

#include <memory>
#include <ostream>
#include <queue>
#include <vector>

#include "msim/sim/event.hpp"
#include "msim/util/rng.hpp"

namespace msim::sim {

class Kernel;

class Agent {
public:
    virtual ~Agent() = default;
    virtual void on_start(Kernel&) {}
    virtual void on_event(Kernel&, const Event&) = 0;
    virtual bool is_exchange() const { return false; }

    AgentId id() const { return id_; }
    Rng& rng() { return rng_; }

private:
    friend class Kernel;
    AgentId id_ = -1;
    Rng rng_;
};

struct KernelConfig {
    NanoTime start_time = 0;
    NanoTime end_time = 0;
    std::uint64_t master_seed = 0;
    NanoTime latency = 0; // agent <-> exchange message delay
};

// Strictly single-threaded discrete-event loop. The event log is a pure
// function of (config, registered agents, master seed).
class Kernel {
public:
    explicit Kernel(KernelConfig cfg);

    AgentId register_agent(std::shared_ptr<Agent> agent);

    // Direct scheduling at an absolute time; rejects past-dated events.
    void schedule(NanoTime fire_time, AgentId recipient, Payload payload);

    // Message send honoring the configured latency.
    void send(AgentId recipient, Payload payload) {
        schedule(now() + config_.latency, recipient, std::move(payload));
    }

    void run();

    NanoTime now() const { return clock_; }
    const KernelConfig& config() const { return config_; }
    AgentId exchange_id() const { return exchange_id_; }
    std::size_t delivered_count() const { return delivered_; }
    const std::vector<Event>& log() const { return log_; }

    Agent& agent(AgentId id) { return *agents_.at(id); }

private:
    KernelConfig config_;
    std::vector<std::shared_ptr<Agent>> agents_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::vector<Event> log_;
    NanoTime clock_ = 0;
    std::uint64_t next_sequence_ = 0;
    std::size_t delivered_ = 0;
    AgentId exchange_id_ = -1;
    bool running_ = false;
    bool started_ = false;
};

void write_event_log_csv(std::ostream& os, const std::vector<Event>& log);

} // namespace msim::sim
