#pragma once

#include <span>
#include <vector>

#include "msim/gan/mat.hpp"
#include "msim/util/rng.hpp"

namespace msim::gan {

inline constexpr double kLeakySlope = 0.2;

inline void leaky_relu_inplace(Mat& m) {
    for (double& v : m.a)
        if (v < 0.0) v *= kLeakySlope;
}

// dX = dY o phi'(.), using the post-activation values (slope > 0 keeps signs)
inline void leaky_relu_backward(const Mat& activated, Mat& grad) {
    for (std::size_t i = 0; i < grad.a.size(); ++i)
        if (activated.a[i] < 0.0) grad.a[i] *= kLeakySlope;
}

inline void tanh_inplace(Mat& m) {
    for (double& v : m.a) v = std::tanh(v);
}

inline void tanh_backward(const Mat& activated, Mat& grad) {
    for (std::size_t i = 0; i < grad.a.size(); ++i)
        grad.a[i] *= 1.0 - activated.a[i] * activated.a[i];
}

// ---------------------------------------------------------------------------
// Dense: Y = X * W + b, W stored [in x out]

struct DenseParams {
    Mat w;
    std::vector<double> b;

    void init(int in, int out, Rng& rng);
    std::vector<std::span<double>> spans() {
        return {std::span<double>(w.a), std::span<double>(b)};
    }
};

struct DenseGrads {
    Mat dw;
    std::vector<double> db;

    void match(const DenseParams& p) {
        dw.resize(p.w.rows, p.w.cols);
        dw.zero();
        db.assign(p.b.size(), 0.0);
    }
    void zero() {
        dw.zero();
        std::fill(db.begin(), db.end(), 0.0);
    }
    std::vector<std::span<double>> spans() {
        return {std::span<double>(dw.a), std::span<double>(db)};
    }
};

void dense_forward(const DenseParams& p, const Mat& x, Mat& y);
// dx may be null; accumulate_dx adds into dx instead of overwriting
void dense_backward(const DenseParams& p, const Mat& x, const Mat& dy, DenseGrads* grads,
                    Mat* dx, bool accumulate_dx = false);

// ---------------------------------------------------------------------------
// 1-D convolution, kernel k, zero 'same' padding. Activations are stored
// channel-major per sample: row = [ch0 x L][ch1 x L]...

struct Conv1dParams {
    int in_ch = 0, out_ch = 0, k = 0, len = 0;
    Mat w; // [out_ch x (in_ch*k)]
    std::vector<double> b;

    void init(int in_channels, int out_channels, int kernel, int length, Rng& rng);
    std::vector<std::span<double>> spans() {
        return {std::span<double>(w.a), std::span<double>(b)};
    }
};

struct Conv1dGrads {
    Mat dw;
    std::vector<double> db;

    void match(const Conv1dParams& p) {
        dw.resize(p.w.rows, p.w.cols);
        dw.zero();
        db.assign(p.b.size(), 0.0);
    }
    void zero() {
        dw.zero();
        std::fill(db.begin(), db.end(), 0.0);
    }
    std::vector<std::span<double>> spans() {
        return {std::span<double>(dw.a), std::span<double>(db)};
    }
};

void conv1d_forward(const Conv1dParams& p, const Mat& x, Mat& y);
void conv1d_backward(const Conv1dParams& p, const Mat& x, const Mat& dy, Conv1dGrads* grads,
                     Mat* dx);

// ---------------------------------------------------------------------------
// Single LSTM cell scanned over T steps; only the final hidden state is
// consumed downstream, which trims the backward pass.

struct LstmParams {
    int input = 0, hidden = 0;
    Mat wx; // [input x 4H], gate order i f g o
    Mat wh; // [hidden x 4H]
    std::vector<double> b;

    void init(int in, int h, Rng& rng);
    std::vector<std::span<double>> spans() {
        return {std::span<double>(wx.a), std::span<double>(wh.a), std::span<double>(b)};
    }
};

struct LstmGrads {
    Mat dwx, dwh;
    std::vector<double> db;

    void match(const LstmParams& p) {
        dwx.resize(p.wx.rows, p.wx.cols);
        dwh.resize(p.wh.rows, p.wh.cols);
        dwx.zero();
        dwh.zero();
        db.assign(p.b.size(), 0.0);
    }
    void zero() {
        dwx.zero();
        dwh.zero();
        std::fill(db.begin(), db.end(), 0.0);
    }
    std::vector<std::span<double>> spans() {
        return {std::span<double>(dwx.a), std::span<double>(dwh.a), std::span<double>(db)};
    }
};

struct LstmCache {
    int steps = 0;
    std::vector<Mat> gates; // per step, B x 4H post-activation
    std::vector<Mat> cell;  // per step, B x H
    std::vector<Mat> tanh_cell;
    std::vector<Mat> hidden;
};

// x holds T step-blocks of `input` columns each; steps are scanned in the
// order given by step_order (index into the blocks).
void lstm_forward(const LstmParams& p, const Mat& x, std::span<const int> step_order,
                  LstmCache* cache, Mat& h_final);
void lstm_backward(const LstmParams& p, const Mat& x, std::span<const int> step_order,
                   const LstmCache& cache, const Mat& dh_final, LstmGrads* grads);

} // namespace msim::gan
