#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "msim/data/dataset.hpp"
#include "msim/gan/model.hpp"

namespace msim::gan {

enum class GpMode { GeneratedPoint, Interpolate, WeightClip };

const char* gp_mode_name(GpMode m);
GpMode gp_mode_from_name(const std::string& name);

struct TrainConfig {
    int epochs = 50;
    int batch_size = 64;
    int critic_steps = 5;
    double gp_lambda = 10.0;
    GpMode gp_mode = GpMode::GeneratedPoint;
    double clip_c = 0.01; // weight-clip bound
    double lr = 1e-4;
    double beta1 = 0.5;
    double beta2 = 0.9;
    double adam_eps = 1e-8;
    std::uint64_t seed = 0;
    int metric_samples = 2000;       // generator draws per epoch for KS metrics
    // adversarial training orbits the equilibrium; the delivered generator is
    // an exponential moving average over the orbit (0 disables)
    double ema_decay = 0.999;
    std::string checkpoint_path;     // written each epoch when non-empty
    std::string scaler_ref;          // recorded in the checkpoint
    bool verbose = false;            // one progress line per epoch on stderr
};

struct EpochMetrics {
    int epoch = 0; // 0 = untrained baseline
    double d_loss = 0.0;
    double g_loss = 0.0;
    std::array<double, 4> ks{}; // price, volume, direction, time (normalized space)
};

struct TrainResult {
    ModelHyper hyper;
    GeneratorParams gen;
    CriticParams critic;
    std::vector<EpochMetrics> history;
};

// Two-sample Kolmogorov-Smirnov distance (takes copies; sorts them).
double ks_distance(std::vector<double> a, std::vector<double> b);

struct AdamState {
    std::vector<std::vector<double>> m, v;
    std::int64_t t = 0;

    void match(const std::vector<std::span<double>>& params);
    void step(std::vector<std::span<double>> params, std::vector<std::span<double>> grads,
              const TrainConfig& cfg);
};

// Owns the models, optimizer state and scratch buffers; train_step is usable
// standalone so toy problems can drive it directly.
class Trainer {
public:
    Trainer(const ModelHyper& hyper, const TrainConfig& cfg);

    // `critic_steps` critic updates then one generator update on this batch.
    // Returns (d_loss, g_loss); throws on non-finite loss.
    std::pair<double, double> train_step(const std::vector<const data::TrainingPair*>& batch);

    // Metrics are computed with the averaged generator when EMA is on.
    std::array<double, 4> ks_metrics(const std::vector<data::TrainingPair>& dataset);

    const GeneratorParams& delivered_generator() const {
        return config.ema_decay > 0.0 ? gen_ema : gen;
    }

    ModelHyper hyper;
    TrainConfig config;
    GeneratorParams gen;
    CriticParams critic;
    GeneratorParams gen_ema;

private:
    void load_batch(const std::vector<const data::TrainingPair*>& batch);
    double critic_update();
    double generator_update();
    void clip_critic_weights();

    GeneratorGrads gen_grads_;
    CriticGrads critic_grads_;
    AdamState gen_opt_, critic_opt_;
    Rng z_rng_, eps_rng_, metric_rng_;

    // batch scratch
    Mat y_, x_real_, z_, x_pen_;
    GenCache gen_cache_;
    LstmCache critic_enc_cache_;
    Mat critic_h_;
    CriticHeadCache head_real_, head_fake_, head_pen_;
    Mat dscore_, du_, dh_, dx_fake_;
};

TrainResult train(const std::vector<data::TrainingPair>& dataset, const ModelHyper& hyper,
                  const TrainConfig& cfg);

void write_metrics_csv(const std::string& path, const std::vector<EpochMetrics>& history);

} // namespace msim::gan
