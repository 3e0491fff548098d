#pragma once

#include <cmath>
#include <cstdint>

namespace msim {

// Counter-based generator: each output is a pure function of (key, counter).
// Substreams keyed by (master seed, stream id) are independent, so adding an
// agent to a simulation never perturbs another agent's draws.
class Rng {
public:
    Rng() : Rng(0, 0) {}

    Rng(std::uint64_t master_seed, std::uint64_t stream_id) {
        key_ = mix(mix(master_seed) ^ 0x9e3779b97f4a7c15ULL ^ mix(stream_id + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next_u64() {
        counter_ += 0x9e3779b97f4a7c15ULL;
        return mix(key_ ^ counter_);
    }

    // uniform in (0,1), never exactly 0 or 1
    double uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // inclusive bounds
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next_u64() % span);
    }

    // Box-Muller; hand-rolled so draws are identical across platforms
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    bool bernoulli(double p) { return uniform() < p; }

    // support {1, 2, ...}
    int geometric(double p) {
        const double u = uniform();
        return 1 + static_cast<int>(std::floor(std::log(1.0 - u) / std::log(1.0 - p)));
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace msim
