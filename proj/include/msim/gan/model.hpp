#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "msim/gan/layers.hpp"

namespace msim::gan {

struct ModelHyper {
    int n_history = 50;   // conditioning window length N
    int n_noise = 50;     // noise features N_f
    int n_features = 10;  // per-step conditioning features
    int lstm_hidden = 32; // encoder width H
    int conv_layers = 2;
    int conv_channels = 16;
    int conv_kernel = 3;
    int critic_width = 64;

    int window_len() const { return n_history * n_features; }
    int gen_input_len() const { return lstm_hidden + n_noise; }
    bool operator==(const ModelHyper&) const = default;
};

// Generator output space: four reals in (-1,1).
struct NormalizedOrder {
    double price = 0.0;
    double volume = 0.0;
    double direction = 0.0;
    double time = 0.0;

    std::array<double, 4> as_array() const { return {price, volume, direction, time}; }
    static NormalizedOrder from_array(const std::array<double, 4>& a) {
        return {a[0], a[1], a[2], a[3]};
    }
};

struct GeneratorParams {
    LstmParams enc;
    std::vector<Conv1dParams> convs;
    DenseParams out;

    void init(const ModelHyper& hyper, Rng& rng);
    std::vector<std::span<double>> spans();
};

struct GeneratorGrads {
    LstmGrads enc;
    std::vector<Conv1dGrads> convs;
    DenseGrads out;

    void match(const GeneratorParams& p);
    void zero();
    std::vector<std::span<double>> spans();
};

struct CriticParams {
    LstmParams enc;
    DenseParams fc1, fc2, fc3;

    void init(const ModelHyper& hyper, Rng& rng);
    std::vector<std::span<double>> spans();
};

struct CriticGrads {
    LstmGrads enc;
    DenseGrads fc1, fc2, fc3;

    void match(const CriticParams& p);
    void zero();
    std::vector<std::span<double>> spans();
};

// Window blocks are most-recent-first; the encoder scans chronologically.
std::vector<int> window_step_order(const ModelHyper& hyper);

// ---------------------------------------------------------------------------
// Batched passes (training path)

struct GenCache {
    LstmCache enc;
    Mat h;                     // B x H
    Mat u;                     // B x (H + Nf), concat(h, z)
    std::vector<Mat> conv_act; // post-activation output of each conv
    Mat x;                     // B x 4 generated orders
};

// The encoder depends only on y, so one encode per batch serves every noise
// draw taken while the generator is frozen.
void generator_encode_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& y,
                            GenCache& cache, bool need_backward);
void generator_head_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& z,
                          GenCache& cache);
void generator_forward_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& y,
                             const Mat& z, GenCache& cache, bool need_backward);
void generator_backward_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& y,
                              const GenCache& cache, const Mat& dx, GeneratorGrads& grads);

struct CriticHeadCache {
    Mat u; // B x (4 + H)
    Mat a1, a2;
    Mat score; // B x 1
};

void critic_encode_batch(const CriticParams& p, const ModelHyper& hyper, const Mat& y,
                         LstmCache* cache, Mat& h);
void critic_head_forward(const CriticParams& p, const Mat& x, const Mat& h,
                         CriticHeadCache& cache);
// du (B x 4+H) is overwritten; pass grads=nullptr to skip parameter gradients
void critic_head_backward(const CriticParams& p, const CriticHeadCache& cache,
                          const Mat& dscore, CriticGrads* grads, Mat* du);

// Mean gradient penalty lambda*(||grad_x D|| - 1)^2 over the batch whose head
// activations are in `cache`; parameter gradients (exact a.e. double
// backprop, head weights only) are accumulated into grads when non-null.
double critic_penalty_batch(const CriticParams& p, const CriticHeadCache& cache, double lambda,
                            CriticGrads* grads);

// ---------------------------------------------------------------------------
// Single-sample entry points

std::vector<double> encode_history(std::span<const double> y, const LstmParams& enc,
                                   const ModelHyper& hyper);
NormalizedOrder generator_forward(std::span<const double> z, std::span<const double> y,
                                  const GeneratorParams& p, const ModelHyper& hyper);
double critic_forward(const NormalizedOrder& x, std::span<const double> y,
                      const CriticParams& p, const ModelHyper& hyper);
std::array<double, 4> critic_input_gradient(const NormalizedOrder& x, std::span<const double> y,
                                            const CriticParams& p, const ModelHyper& hyper);
double gradient_penalty(const NormalizedOrder& x_eval, std::span<const double> y,
                        const CriticParams& p, const ModelHyper& hyper, double lambda);

} // namespace msim::gan
