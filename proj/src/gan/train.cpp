#include "msim/gan/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "msim/gan/checkpoint.hpp"
#include "msim/util/csv.hpp"

namespace msim::gan {

const char* gp_mode_name(GpMode m) {
    switch (m) {
        case GpMode::GeneratedPoint: return "generated-point";
        case GpMode::Interpolate: return "interpolate";
        case GpMode::WeightClip: return "weight-clip";
    }
    return "?";
}

GpMode gp_mode_from_name(const std::string& name) {
    if (name == "generated-point") return GpMode::GeneratedPoint;
    if (name == "interpolate") return GpMode::Interpolate;
    if (name == "weight-clip") return GpMode::WeightClip;
    throw std::invalid_argument("unknown gp mode: " + name);
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double sup = 0.0;
    // evaluate the ECDF gap only at full jump points so ties are exact
    while (i < a.size() || j < b.size()) {
        const double va = i < a.size() ? a[i] : std::numeric_limits<double>::infinity();
        const double vb = j < b.size() ? b[j] : std::numeric_limits<double>::infinity();
        const double v = std::min(va, vb);
        while (i < a.size() && a[i] == v) ++i;
        while (j < b.size() && b[j] == v) ++j;
        sup = std::max(sup, std::abs(i / na - j / nb));
    }
    return sup;
}

void AdamState::match(const std::vector<std::span<double>>& params) {
    m.clear();
    v.clear();
    for (const auto& span : params) {
        m.emplace_back(span.size(), 0.0);
        v.emplace_back(span.size(), 0.0);
    }
    t = 0;
}

void AdamState::step(std::vector<std::span<double>> params, std::vector<std::span<double>> grads,
                     const TrainConfig& cfg) {
    ++t;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(t));
    for (std::size_t s = 0; s < params.size(); ++s) {
        double* p = params[s].data();
        const double* g = grads[s].data();
        double* ms = m[s].data();
        double* vs = v[s].data();
        const std::size_t n = params[s].size();
        for (std::size_t i = 0; i < n; ++i) {
            ms[i] = cfg.beta1 * ms[i] + (1.0 - cfg.beta1) * g[i];
            vs[i] = cfg.beta2 * vs[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double mhat = ms[i] / bc1;
            const double vhat = vs[i] / bc2;
            p[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.adam_eps);
        }
    }
}

Trainer::Trainer(const ModelHyper& h, const TrainConfig& cfg)
    : hyper(h),
      config(cfg),
      z_rng_(cfg.seed, 103),
      eps_rng_(cfg.seed, 105),
      metric_rng_(cfg.seed, 104) {
    Rng init_rng(cfg.seed, 101);
    gen.init(hyper, init_rng);
    critic.init(hyper, init_rng);
    gen_ema = gen;
    gen_grads_.match(gen);
    critic_grads_.match(critic);
    gen_opt_.match(gen.spans());
    critic_opt_.match(critic.spans());
}

void Trainer::load_batch(const std::vector<const data::TrainingPair*>& batch) {
    const int b = static_cast<int>(batch.size());
    if (b < 2) throw std::invalid_argument("train_step: batch size must be >= 2");
    y_.resize(b, hyper.window_len());
    x_real_.resize(b, 4);
    for (int r = 0; r < b; ++r) {
        if (static_cast<int>(batch[r]->y.size()) != hyper.window_len())
            throw std::invalid_argument("train_step: window length mismatch");
        std::copy(batch[r]->y.begin(), batch[r]->y.end(), y_.row(r));
        std::copy(batch[r]->target.begin(), batch[r]->target.end(), x_real_.row(r));
    }
}

void Trainer::clip_critic_weights() {
    for (auto span : critic.spans())
        for (double& w : span) w = std::clamp(w, -config.clip_c, config.clip_c);
}

double Trainer::critic_update() {
    const int b = y_.rows;
    const double inv_b = 1.0 / b;

    // fake orders under the frozen generator
    z_.resize(b, hyper.n_noise);
    for (double& v : z_.a) v = z_rng_.normal();
    generator_head_batch(gen, hyper, z_, gen_cache_);

    critic_encode_batch(critic, hyper, y_, &critic_enc_cache_, critic_h_);
    critic_head_forward(critic, x_real_, critic_h_, head_real_);
    critic_head_forward(critic, gen_cache_.x, critic_h_, head_fake_);

    double main_loss = 0.0; // E[D(fake)] - E[D(real)], the minimized direction
    for (int r = 0; r < b; ++r)
        main_loss += (head_fake_.score.at(r, 0) - head_real_.score.at(r, 0)) * inv_b;

    critic_grads_.zero();
    dscore_.resize(b, 1);

    // d(main)/d(score_real) = -1/B
    for (int r = 0; r < b; ++r) dscore_.at(r, 0) = -inv_b;
    critic_head_backward(critic, head_real_, dscore_, &critic_grads_, &du_);
    dh_.resize(b, hyper.lstm_hidden);
    for (int r = 0; r < b; ++r)
        for (int j = 0; j < hyper.lstm_hidden; ++j) dh_.at(r, j) = du_.at(r, 4 + j);

    for (int r = 0; r < b; ++r) dscore_.at(r, 0) = inv_b;
    critic_head_backward(critic, head_fake_, dscore_, &critic_grads_, &du_);
    for (int r = 0; r < b; ++r)
        for (int j = 0; j < hyper.lstm_hidden; ++j) dh_.at(r, j) += du_.at(r, 4 + j);

    double penalty = 0.0;
    if (config.gp_mode == GpMode::GeneratedPoint) {
        penalty = critic_penalty_batch(critic, head_fake_, config.gp_lambda, &critic_grads_);
    } else if (config.gp_mode == GpMode::Interpolate) {
        x_pen_.resize(b, 4);
        for (int r = 0; r < b; ++r) {
            const double eps = eps_rng_.uniform();
            for (int c = 0; c < 4; ++c)
                x_pen_.at(r, c) =
                    eps * x_real_.at(r, c) + (1.0 - eps) * gen_cache_.x.at(r, c);
        }
        critic_head_forward(critic, x_pen_, critic_h_, head_pen_);
        penalty = critic_penalty_batch(critic, head_pen_, config.gp_lambda, &critic_grads_);
    }

    lstm_backward(critic.enc, y_, window_step_order(hyper), critic_enc_cache_, dh_,
                  &critic_grads_.enc);

    critic_opt_.step(critic.spans(), critic_grads_.spans(), config);
    if (config.gp_mode == GpMode::WeightClip) clip_critic_weights();

    return main_loss + penalty;
}

double Trainer::generator_update() {
    const int b = y_.rows;
    const double inv_b = 1.0 / b;

    z_.resize(b, hyper.n_noise);
    for (double& v : z_.a) v = z_rng_.normal();
    generator_head_batch(gen, hyper, z_, gen_cache_);

    critic_encode_batch(critic, hyper, y_, nullptr, critic_h_);
    critic_head_forward(critic, gen_cache_.x, critic_h_, head_fake_);

    double g_loss = 0.0; // -E[D(G(z|y))]
    for (int r = 0; r < b; ++r) g_loss -= head_fake_.score.at(r, 0) * inv_b;

    dscore_.resize(b, 1);
    for (int r = 0; r < b; ++r) dscore_.at(r, 0) = -inv_b;
    critic_head_backward(critic, head_fake_, dscore_, nullptr, &du_);

    dx_fake_.resize(b, 4);
    for (int r = 0; r < b; ++r)
        for (int c = 0; c < 4; ++c) dx_fake_.at(r, c) = du_.at(r, c);

    gen_grads_.zero();
    generator_backward_batch(gen, hyper, y_, gen_cache_, dx_fake_, gen_grads_);
    gen_opt_.step(gen.spans(), gen_grads_.spans(), config);

    if (config.ema_decay > 0.0) {
        const double d = config.ema_decay;
        auto live = gen.spans();
        auto avg = gen_ema.spans();
        for (std::size_t s = 0; s < live.size(); ++s)
            for (std::size_t i = 0; i < live[s].size(); ++i)
                avg[s][i] = d * avg[s][i] + (1.0 - d) * live[s][i];
    }
    return g_loss;
}

std::pair<double, double> Trainer::train_step(
    const std::vector<const data::TrainingPair*>& batch) {
    load_batch(batch);
    generator_encode_batch(gen, hyper, y_, gen_cache_, /*need_backward=*/true);

    double d_loss = 0.0;
    for (int s = 0; s < config.critic_steps; ++s) d_loss = critic_update();
    const double g_loss = generator_update();

    if (!std::isfinite(d_loss) || !std::isfinite(g_loss))
        throw std::runtime_error("non-finite loss (d=" + std::to_string(d_loss) +
                                 ", g=" + std::to_string(g_loss) + ")");
    return {d_loss, g_loss};
}

std::array<double, 4> Trainer::ks_metrics(const std::vector<data::TrainingPair>& dataset) {
    const int n = static_cast<int>(dataset.size());
    const int m = std::min(config.metric_samples, n);
    const int stride = std::max(1, n / m);

    // direction is a sign once denormalized; compare it as one, or the
    // tanh output's continuity puts an artificial floor under the distance
    auto field_value = [](int f, double v) {
        return f == 2 ? (v < 0.0 ? -1.0 : 1.0) : v;
    };

    std::array<std::vector<double>, 4> generated, real;
    for (int f = 0; f < 4; ++f) {
        generated[f].reserve(m);
        real[f].reserve(n);
    }
    for (const auto& pair : dataset)
        for (int f = 0; f < 4; ++f) real[f].push_back(field_value(f, pair.target[f]));

    GenCache cache;
    Mat y, z;
    const int chunk = 256;
    for (int start = 0; start < m; start += chunk) {
        const int b = std::min(chunk, m - start);
        y.resize(b, hyper.window_len());
        z.resize(b, hyper.n_noise);
        for (int r = 0; r < b; ++r) {
            const auto& pair = dataset[static_cast<std::size_t>((start + r) * stride) % n];
            std::copy(pair.y.begin(), pair.y.end(), y.row(r));
        }
        for (double& v : z.a) v = metric_rng_.normal();
        generator_forward_batch(delivered_generator(), hyper, y, z, cache, false);
        for (int r = 0; r < b; ++r)
            for (int f = 0; f < 4; ++f)
                generated[f].push_back(field_value(f, cache.x.at(r, f)));
    }

    std::array<double, 4> ks{};
    for (int f = 0; f < 4; ++f) ks[f] = ks_distance(generated[f], real[f]);
    return ks;
}

TrainResult train(const std::vector<data::TrainingPair>& dataset, const ModelHyper& hyper,
                  const TrainConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("train: empty dataset");
    if (static_cast<int>(dataset.size()) < cfg.batch_size)
        throw std::invalid_argument("train: dataset smaller than one batch");

    Trainer trainer(hyper, cfg);
    Rng shuffle_rng(cfg.seed, 102);

    TrainResult result;
    result.hyper = hyper;

    EpochMetrics baseline;
    baseline.epoch = 0;
    baseline.ks = trainer.ks_metrics(dataset);
    result.history.push_back(baseline);

    std::vector<std::size_t> indices(dataset.size());
    std::iota(indices.begin(), indices.end(), 0);
    std::vector<const data::TrainingPair*> batch(cfg.batch_size);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        for (std::size_t i = indices.size(); i > 1; --i) {
            const std::size_t j =
                static_cast<std::size_t>(shuffle_rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
            std::swap(indices[i - 1], indices[j]);
        }

        double d_sum = 0.0, g_sum = 0.0;
        int steps = 0;
        const std::size_t n_batches = dataset.size() / cfg.batch_size;
        for (std::size_t bi = 0; bi < n_batches; ++bi) {
            for (int r = 0; r < cfg.batch_size; ++r)
                batch[r] = &dataset[indices[bi * cfg.batch_size + r]];
            try {
                const auto [d, g] = trainer.train_step(batch);
                d_sum += d;
                g_sum += g;
                ++steps;
            } catch (const std::runtime_error& e) {
                const std::string hint = cfg.checkpoint_path.empty()
                                             ? "no checkpoint configured"
                                             : "last-good checkpoint: " + cfg.checkpoint_path;
                throw std::runtime_error(std::string(e.what()) + " at epoch " +
                                         std::to_string(epoch) + "; " + hint);
            }
        }

        EpochMetrics metrics;
        metrics.epoch = epoch;
        metrics.d_loss = steps ? d_sum / steps : 0.0;
        metrics.g_loss = steps ? g_sum / steps : 0.0;
        metrics.ks = trainer.ks_metrics(dataset);
        result.history.push_back(metrics);

        if (!cfg.checkpoint_path.empty())
            save_checkpoint(cfg.checkpoint_path, hyper, trainer.delivered_generator(),
                            trainer.critic, cfg);
        if (cfg.verbose)
            std::fprintf(stderr,
                         "epoch %3d/%d  d_loss=%8.4f  g_loss=%8.4f  ks=%.3f,%.3f,%.3f,%.3f\n",
                         epoch, cfg.epochs, metrics.d_loss, metrics.g_loss, metrics.ks[0],
                         metrics.ks[1], metrics.ks[2], metrics.ks[3]);
    }

    result.gen = trainer.delivered_generator();
    result.critic = trainer.critic;
    return result;
}

void write_metrics_csv(const std::string& path, const std::vector<EpochMetrics>& history) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "epoch,d_loss,g_loss,ks_price,ks_volume,ks_direction,ks_time\n";
    for (const EpochMetrics& m : history) {
        out << m.epoch << ',' << fmt_double(m.d_loss) << ',' << fmt_double(m.g_loss);
        for (double k : m.ks) out << ',' << fmt_double(k);
        out << '\n';
    }
}

} // namespace msim::gan
