#include "msim/gan/model.hpp"

#include <cmath>
#include <stdexcept>

namespace msim::gan {

namespace {

void append(std::vector<std::span<double>>& out, std::vector<std::span<double>> more) {
    out.insert(out.end(), more.begin(), more.end());
}

} // namespace

void GeneratorParams::init(const ModelHyper& hyper, Rng& rng) {
    enc.init(hyper.n_features, hyper.lstm_hidden, rng);
    convs.resize(hyper.conv_layers);
    const int len = hyper.gen_input_len();
    for (int i = 0; i < hyper.conv_layers; ++i)
        convs[i].init(i == 0 ? 1 : hyper.conv_channels, hyper.conv_channels, hyper.conv_kernel,
                      len, rng);
    out.init(hyper.conv_channels * len, 4, rng);
}

std::vector<std::span<double>> GeneratorParams::spans() {
    std::vector<std::span<double>> s = enc.spans();
    for (auto& c : convs) append(s, c.spans());
    append(s, out.spans());
    return s;
}

void GeneratorGrads::match(const GeneratorParams& p) {
    enc.match(p.enc);
    convs.resize(p.convs.size());
    for (std::size_t i = 0; i < p.convs.size(); ++i) convs[i].match(p.convs[i]);
    out.match(p.out);
}

void GeneratorGrads::zero() {
    enc.zero();
    for (auto& c : convs) c.zero();
    out.zero();
}

std::vector<std::span<double>> GeneratorGrads::spans() {
    std::vector<std::span<double>> s = enc.spans();
    for (auto& c : convs) append(s, c.spans());
    append(s, out.spans());
    return s;
}

void CriticParams::init(const ModelHyper& hyper, Rng& rng) {
    enc.init(hyper.n_features, hyper.lstm_hidden, rng);
    fc1.init(4 + hyper.lstm_hidden, hyper.critic_width, rng);
    fc2.init(hyper.critic_width, hyper.critic_width, rng);
    fc3.init(hyper.critic_width, 1, rng);
}

std::vector<std::span<double>> CriticParams::spans() {
    std::vector<std::span<double>> s = enc.spans();
    append(s, fc1.spans());
    append(s, fc2.spans());
    append(s, fc3.spans());
    return s;
}

void CriticGrads::match(const CriticParams& p) {
    enc.match(p.enc);
    fc1.match(p.fc1);
    fc2.match(p.fc2);
    fc3.match(p.fc3);
}

void CriticGrads::zero() {
    enc.zero();
    fc1.zero();
    fc2.zero();
    fc3.zero();
}

std::vector<std::span<double>> CriticGrads::spans() {
    std::vector<std::span<double>> s = enc.spans();
    append(s, fc1.spans());
    append(s, fc2.spans());
    append(s, fc3.spans());
    return s;
}

std::vector<int> window_step_order(const ModelHyper& hyper) {
    std::vector<int> order(hyper.n_history);
    for (int s = 0; s < hyper.n_history; ++s) order[s] = hyper.n_history - 1 - s;
    return order;
}

void generator_encode_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& y,
                            GenCache& cache, bool need_backward) {
    const auto order = window_step_order(hyper);
    lstm_forward(p.enc, y, order, need_backward ? &cache.enc : nullptr, cache.h);
}

void generator_head_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& z,
                          GenCache& cache) {
    const int batch = cache.h.rows;
    cache.u.resize(batch, hyper.gen_input_len());
    for (int r = 0; r < batch; ++r) {
        double* u = cache.u.row(r);
        const double* h = cache.h.row(r);
        const double* zr = z.row(r);
        for (int j = 0; j < hyper.lstm_hidden; ++j) u[j] = h[j];
        for (int j = 0; j < hyper.n_noise; ++j) u[hyper.lstm_hidden + j] = zr[j];
    }

    cache.conv_act.resize(p.convs.size());
    const Mat* cur = &cache.u;
    for (std::size_t i = 0; i < p.convs.size(); ++i) {
        conv1d_forward(p.convs[i], *cur, cache.conv_act[i]);
        leaky_relu_inplace(cache.conv_act[i]);
        cur = &cache.conv_act[i];
    }

    dense_forward(p.out, *cur, cache.x);
    tanh_inplace(cache.x);
}

void generator_forward_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& y,
                             const Mat& z, GenCache& cache, bool need_backward) {
    generator_encode_batch(p, hyper, y, cache, need_backward);
    generator_head_batch(p, hyper, z, cache);
}

void generator_backward_batch(const GeneratorParams& p, const ModelHyper& hyper, const Mat& y,
                              const GenCache& cache, const Mat& dx, GeneratorGrads& grads) {
    Mat d = dx;
    tanh_backward(cache.x, d);

    const Mat& last_act = cache.conv_act.back();
    Mat d_act;
    dense_backward(p.out, last_act, d, &grads.out, &d_act);

    for (int i = static_cast<int>(p.convs.size()) - 1; i >= 0; --i) {
        leaky_relu_backward(cache.conv_act[i], d_act);
        const Mat& input = i == 0 ? cache.u : cache.conv_act[i - 1];
        Mat d_in;
        conv1d_backward(p.convs[i], input, d_act, &grads.convs[i], &d_in);
        d_act = std::move(d_in);
    }

    // split du: encoder part flows back, noise part is data
    Mat dh(cache.h.rows, hyper.lstm_hidden);
    for (int r = 0; r < dh.rows; ++r) {
        const double* du = d_act.row(r);
        double* dhr = dh.row(r);
        for (int j = 0; j < hyper.lstm_hidden; ++j) dhr[j] = du[j];
    }
    const auto order = window_step_order(hyper);
    lstm_backward(p.enc, y, order, cache.enc, dh, &grads.enc);
}

void critic_encode_batch(const CriticParams& p, const ModelHyper& hyper, const Mat& y,
                         LstmCache* cache, Mat& h) {
    const auto order = window_step_order(hyper);
    lstm_forward(p.enc, y, order, cache, h);
}

void critic_head_forward(const CriticParams& p, const Mat& x, const Mat& h,
                         CriticHeadCache& cache) {
    const int batch = x.rows;
    const int hidden = h.cols;
    cache.u.resize(batch, 4 + hidden);
    for (int r = 0; r < batch; ++r) {
        double* u = cache.u.row(r);
        const double* xr = x.row(r);
        const double* hr = h.row(r);
        for (int j = 0; j < 4; ++j) u[j] = xr[j];
        for (int j = 0; j < hidden; ++j) u[4 + j] = hr[j];
    }
    dense_forward(p.fc1, cache.u, cache.a1);
    leaky_relu_inplace(cache.a1);
    dense_forward(p.fc2, cache.a1, cache.a2);
    leaky_relu_inplace(cache.a2);
    dense_forward(p.fc3, cache.a2, cache.score);
}

void critic_head_backward(const CriticParams& p, const CriticHeadCache& cache,
                          const Mat& dscore, CriticGrads* grads, Mat* du) {
    Mat d2;
    dense_backward(p.fc3, cache.a2, dscore, grads ? &grads->fc3 : nullptr, &d2);
    leaky_relu_backward(cache.a2, d2);
    Mat d1;
    dense_backward(p.fc2, cache.a1, d2, grads ? &grads->fc2 : nullptr, &d1);
    leaky_relu_backward(cache.a1, d1);
    dense_backward(p.fc1, cache.u, d1, grads ? &grads->fc1 : nullptr, du);
}

double critic_penalty_batch(const CriticParams& p, const CriticHeadCache& cache, double lambda,
                            CriticGrads* grads) {
    const int batch = cache.u.rows;
    const int width = p.fc2.w.rows;
    const double inv_b = 1.0 / batch;

    std::vector<double> q2(width), t(width), q1(width), r1(width);
    double penalty = 0.0;

    for (int r = 0; r < batch; ++r) {
        const double* a1 = cache.a1.row(r);
        const double* a2 = cache.a2.row(r);

        // grad of the score w.r.t. the head input, masks frozen a.e.
        for (int j = 0; j < width; ++j)
            q2[j] = (a2[j] < 0.0 ? kLeakySlope : 1.0) * p.fc3.w.at(j, 0);
        for (int i = 0; i < width; ++i) {
            const double* w2row = p.fc2.w.row(i);
            double sum = 0.0;
            for (int j = 0; j < width; ++j) sum += w2row[j] * q2[j];
            t[i] = sum;
        }
        for (int j = 0; j < width; ++j) q1[j] = (a1[j] < 0.0 ? kLeakySlope : 1.0) * t[j];

        double g[4];
        double norm_sq = 0.0;
        for (int c = 0; c < 4; ++c) {
            const double* w1row = p.fc1.w.row(c);
            double sum = 0.0;
            for (int j = 0; j < width; ++j) sum += w1row[j] * q1[j];
            g[c] = sum;
            norm_sq += sum * sum;
        }
        const double norm = std::sqrt(norm_sq);
        penalty += lambda * (norm - 1.0) * (norm - 1.0) * inv_b;

        if (!grads) continue;
        const double coef = 2.0 * lambda * (norm - 1.0) / (std::max(norm, 1e-12)) * inv_b;
        double v[4];
        for (int c = 0; c < 4; ++c) v[c] = coef * g[c];

        // dP/dW1 (x rows only), dP/dW2, dP/dw3; biases and encoder get no
        // penalty gradient under the frozen-mask convention
        for (int c = 0; c < 4; ++c) {
            double* dw1row = grads->fc1.dw.row(c);
            for (int j = 0; j < width; ++j) dw1row[j] += v[c] * q1[j];
        }
        for (int j = 0; j < width; ++j) {
            double sum = 0.0;
            for (int c = 0; c < 4; ++c) sum += p.fc1.w.at(c, j) * v[c];
            r1[j] = (a1[j] < 0.0 ? kLeakySlope : 1.0) * sum;
        }
        for (int i = 0; i < width; ++i) {
            double* dw2row = grads->fc2.dw.row(i);
            const double r1i = r1[i];
            for (int j = 0; j < width; ++j) dw2row[j] += r1i * q2[j];
        }
        for (int j = 0; j < width; ++j) {
            double sum = 0.0;
            for (int i = 0; i < width; ++i) sum += p.fc2.w.at(i, j) * r1[i];
            grads->fc3.dw.at(j, 0) += (a2[j] < 0.0 ? kLeakySlope : 1.0) * sum;
        }
    }
    return penalty;
}

// ---------------------------------------------------------------------------

namespace {

Mat row_matrix(std::span<const double> v) {
    Mat m(1, static_cast<int>(v.size()));
    std::copy(v.begin(), v.end(), m.a.begin());
    return m;
}

void check_window(std::span<const double> y, const ModelHyper& hyper) {
    if (static_cast<int>(y.size()) != hyper.window_len())
        throw std::invalid_argument("conditioning window has length " +
                                    std::to_string(y.size()) + ", expected " +
                                    std::to_string(hyper.window_len()));
}

} // namespace

std::vector<double> encode_history(std::span<const double> y, const LstmParams& enc,
                                   const ModelHyper& hyper) {
    check_window(y, hyper);
    const Mat ym = row_matrix(y);
    const auto order = window_step_order(hyper);
    Mat h;
    lstm_forward(enc, ym, order, nullptr, h);
    return h.a;
}

NormalizedOrder generator_forward(std::span<const double> z, std::span<const double> y,
                                  const GeneratorParams& p, const ModelHyper& hyper) {
    check_window(y, hyper);
    if (static_cast<int>(z.size()) != hyper.n_noise)
        throw std::invalid_argument("noise vector has wrong length");
    const Mat ym = row_matrix(y);
    const Mat zm = row_matrix(z);
    GenCache cache;
    generator_forward_batch(p, hyper, ym, zm, cache, false);
    for (double v : cache.x.a)
        if (!std::isfinite(v))
            throw std::runtime_error("generator produced a non-finite output");
    return NormalizedOrder{cache.x.at(0, 0), cache.x.at(0, 1), cache.x.at(0, 2),
                           cache.x.at(0, 3)};
}

double critic_forward(const NormalizedOrder& x, std::span<const double> y,
                      const CriticParams& p, const ModelHyper& hyper) {
    check_window(y, hyper);
    const Mat ym = row_matrix(y);
    Mat h;
    critic_encode_batch(p, hyper, ym, nullptr, h);
    Mat xm(1, 4);
    const auto arr = x.as_array();
    std::copy(arr.begin(), arr.end(), xm.a.begin());
    CriticHeadCache cache;
    critic_head_forward(p, xm, h, cache);
    const double score = cache.score.at(0, 0);
    if (!std::isfinite(score)) throw std::runtime_error("critic produced a non-finite score");
    return score;
}

std::array<double, 4> critic_input_gradient(const NormalizedOrder& x, std::span<const double> y,
                                            const CriticParams& p, const ModelHyper& hyper) {
    check_window(y, hyper);
    const Mat ym = row_matrix(y);
    Mat h;
    critic_encode_batch(p, hyper, ym, nullptr, h);
    Mat xm(1, 4);
    const auto arr = x.as_array();
    std::copy(arr.begin(), arr.end(), xm.a.begin());
    CriticHeadCache cache;
    critic_head_forward(p, xm, h, cache);

    Mat dscore(1, 1);
    dscore.at(0, 0) = 1.0;
    Mat du;
    critic_head_backward(p, cache, dscore, nullptr, &du);
    return {du.at(0, 0), du.at(0, 1), du.at(0, 2), du.at(0, 3)};
}

double gradient_penalty(const NormalizedOrder& x_eval, std::span<const double> y,
                        const CriticParams& p, const ModelHyper& hyper, double lambda) {
    const auto g = critic_input_gradient(x_eval, y, p, hyper);
    double norm_sq = 0.0;
    for (double v : g) norm_sq += v * v;
    const double norm = std::sqrt(norm_sq);
    return lambda * (norm - 1.0) * (norm - 1.0);
}

} // namespace msim::gan
