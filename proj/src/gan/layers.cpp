#include "msim/gan/layers.hpp"

#include <cmath>

namespace msim::gan {

namespace {

void xavier_init(Mat& w, int fan_in, int fan_out, Rng& rng) {
    const double a = std::sqrt(6.0 / (fan_in + fan_out));
    for (double& v : w.a) v = rng.uniform(-a, a);
}

} // namespace

void DenseParams::init(int in, int out, Rng& rng) {
    w.resize(in, out);
    xavier_init(w, in, out, rng);
    b.assign(out, 0.0);
}

void dense_forward(const DenseParams& p, const Mat& x, Mat& y) {
    y.resize(x.rows, p.w.cols);
    gemm_nn(x.rows, p.w.cols, p.w.rows, x.a.data(), x.cols, p.w.a.data(), p.w.cols, y.a.data(),
            y.cols, false);
    for (int r = 0; r < y.rows; ++r) {
        double* row = y.row(r);
        for (int c = 0; c < y.cols; ++c) row[c] += p.b[c];
    }
}

void dense_backward(const DenseParams& p, const Mat& x, const Mat& dy, DenseGrads* grads,
                    Mat* dx, bool accumulate_dx) {
    if (grads) {
        gemm_tn(p.w.rows, p.w.cols, x.rows, x.a.data(), x.cols, dy.a.data(), dy.cols,
                grads->dw.a.data(), grads->dw.cols, true);
        for (int r = 0; r < dy.rows; ++r) {
            const double* row = dy.row(r);
            for (int c = 0; c < dy.cols; ++c) grads->db[c] += row[c];
        }
    }
    if (dx) {
        if (!accumulate_dx) dx->resize(x.rows, x.cols);
        gemm_nt(x.rows, p.w.rows, p.w.cols, dy.a.data(), dy.cols, p.w.a.data(), p.w.cols,
                dx->a.data(), dx->cols, accumulate_dx);
    }
}

void Conv1dParams::init(int in_channels, int out_channels, int kernel, int length, Rng& rng) {
    in_ch = in_channels;
    out_ch = out_channels;
    k = kernel;
    len = length;
    w.resize(out_ch, in_ch * k);
    xavier_init(w, in_ch * k, out_ch * k, rng);
    b.assign(out_ch, 0.0);
}

void conv1d_forward(const Conv1dParams& p, const Mat& x, Mat& y) {
    const int pad = p.k / 2;
    y.resize(x.rows, p.out_ch * p.len);
    for (int r = 0; r < x.rows; ++r) {
        const double* in = x.row(r);
        double* out = y.row(r);
        for (int oc = 0; oc < p.out_ch; ++oc) {
            double* out_c = out + oc * p.len;
            for (int q = 0; q < p.len; ++q) out_c[q] = p.b[oc];
            const double* wrow = p.w.row(oc);
            for (int ic = 0; ic < p.in_ch; ++ic) {
                const double* in_c = in + ic * p.len;
                for (int kk = 0; kk < p.k; ++kk) {
                    const double wv = wrow[ic * p.k + kk];
                    const int off = kk - pad;
                    const int lo = std::max(0, -off);
                    const int hi = std::min(p.len, p.len - off);
                    for (int q = lo; q < hi; ++q) out_c[q] += wv * in_c[q + off];
                }
            }
        }
    }
}

void conv1d_backward(const Conv1dParams& p, const Mat& x, const Mat& dy, Conv1dGrads* grads,
                     Mat* dx) {
    const int pad = p.k / 2;
    if (dx) {
        dx->resize(x.rows, x.cols);
        dx->zero();
    }
    for (int r = 0; r < x.rows; ++r) {
        const double* in = x.row(r);
        const double* dout = dy.row(r);
        double* din = dx ? dx->row(r) : nullptr;
        for (int oc = 0; oc < p.out_ch; ++oc) {
            const double* dout_c = dout + oc * p.len;
            if (grads)
                for (int q = 0; q < p.len; ++q) grads->db[oc] += dout_c[q];
            const double* wrow = p.w.row(oc);
            double* dwrow = grads ? grads->dw.row(oc) : nullptr;
            for (int ic = 0; ic < p.in_ch; ++ic) {
                const double* in_c = in + ic * p.len;
                double* din_c = din ? din + ic * p.len : nullptr;
                for (int kk = 0; kk < p.k; ++kk) {
                    const int off = kk - pad;
                    const int lo = std::max(0, -off);
                    const int hi = std::min(p.len, p.len - off);
                    if (grads) {
                        double sum = 0.0;
                        for (int q = lo; q < hi; ++q) sum += dout_c[q] * in_c[q + off];
                        dwrow[ic * p.k + kk] += sum;
                    }
                    if (din_c) {
                        const double wv = wrow[ic * p.k + kk];
                        for (int q = lo; q < hi; ++q) din_c[q + off] += wv * dout_c[q];
                    }
                }
            }
        }
    }
}

void LstmParams::init(int in, int h, Rng& rng) {
    input = in;
    hidden = h;
    wx.resize(in, 4 * h);
    wh.resize(h, 4 * h);
    xavier_init(wx, in, 4 * h, rng);
    xavier_init(wh, h, 4 * h, rng);
    b.assign(4 * h, 0.0);
    // forget gate starts open
    for (int j = h; j < 2 * h; ++j) b[j] = 1.0;
}

namespace {

// exp-based activations so the whole gate loop vectorizes (libmvec provides
// a simd exp; there is no simd tanh)
inline double sigmoid_via_exp(double z) { return 1.0 / (1.0 + std::exp(-z)); }
inline double tanh_via_exp(double z) { return 2.0 / (1.0 + std::exp(-2.0 * z)) - 1.0; }

} // namespace

void lstm_forward(const LstmParams& p, const Mat& x, std::span<const int> step_order,
                  LstmCache* cache, Mat& h_final) {
    const int batch = x.rows;
    const int h = p.hidden;
    const int steps = static_cast<int>(step_order.size());

    if (cache) {
        cache->steps = steps;
        cache->gates.resize(steps);
        cache->cell.resize(steps);
        cache->tanh_cell.resize(steps);
        cache->hidden.resize(steps);
        for (int s = 0; s < steps; ++s) {
            cache->gates[s].resize(batch, 4 * h);
            cache->cell[s].resize(batch, h);
            cache->tanh_cell[s].resize(batch, h);
            cache->hidden[s].resize(batch, h);
        }
    }

    Mat scratch_gates, scratch_state;
    if (!cache) {
        scratch_gates.resize(batch, 4 * h);
        scratch_state.resize(batch, 3 * h); // cell | tanh_cell | hidden interleaved by row
    }

    if (steps == 0) {
        h_final.resize(batch, h);
        h_final.zero();
        return;
    }

    const Mat* h_prev = nullptr;
    const Mat* c_prev = nullptr;
    Mat h_cur_buf(batch, h), c_cur_buf(batch, h), h_prev_buf(batch, h), c_prev_buf(batch, h);

    for (int s = 0; s < steps; ++s) {
        const int block = step_order[s];
        Mat& gates = cache ? cache->gates[s] : scratch_gates;

        // gates = X_t * Wx + H_{t-1} * Wh + b
        gemm_nn(batch, 4 * h, p.input, x.a.data() + block * p.input, x.cols, p.wx.a.data(),
                p.wx.cols, gates.a.data(), gates.cols, false);
        if (h_prev)
            gemm_nn(batch, 4 * h, h, h_prev->a.data(), h_prev->cols, p.wh.a.data(), p.wh.cols,
                    gates.a.data(), gates.cols, true);

        Mat& c_out = cache ? cache->cell[s] : c_cur_buf;
        Mat& tanh_out = cache ? cache->tanh_cell[s] : scratch_state;
        Mat& h_out = cache ? cache->hidden[s] : h_cur_buf;

        for (int r = 0; r < batch; ++r) {
            double* g = gates.row(r);
            for (int j = 0; j < 4 * h; ++j) g[j] += p.b[j];
            for (int j = 0; j < 2 * h; ++j) g[j] = sigmoid_via_exp(g[j]);
            for (int j = 2 * h; j < 3 * h; ++j) g[j] = tanh_via_exp(g[j]);
            for (int j = 3 * h; j < 4 * h; ++j) g[j] = sigmoid_via_exp(g[j]);

            const double* cp = c_prev ? c_prev->row(r) : nullptr;
            double* cc = c_out.row(r);
            double* tc = cache ? tanh_out.row(r) : scratch_state.row(r);
            double* hc = h_out.row(r);
            for (int j = 0; j < h; ++j) {
                cc[j] = g[j] * g[2 * h + j] + (cp ? g[h + j] * cp[j] : 0.0);
                tc[j] = tanh_via_exp(cc[j]);
                hc[j] = g[3 * h + j] * tc[j];
            }
        }

        if (cache) {
            h_prev = &cache->hidden[s];
            c_prev = &cache->cell[s];
        } else {
            std::swap(h_cur_buf, h_prev_buf);
            std::swap(c_cur_buf, c_prev_buf);
            h_prev = &h_prev_buf;
            c_prev = &c_prev_buf;
        }
    }
    h_final = *h_prev;
}

void lstm_backward(const LstmParams& p, const Mat& x, std::span<const int> step_order,
                   const LstmCache& cache, const Mat& dh_final, LstmGrads* grads) {
    const int batch = x.rows;
    const int h = p.hidden;
    const int steps = cache.steps;

    Mat dh = dh_final;
    Mat dc(batch, h);
    Mat dgates(batch, 4 * h);

    for (int s = steps - 1; s >= 0; --s) {
        const Mat& gates = cache.gates[s];
        const Mat& tanh_c = cache.tanh_cell[s];
        const Mat* c_prev = s > 0 ? &cache.cell[s - 1] : nullptr;
        const Mat* h_prev = s > 0 ? &cache.hidden[s - 1] : nullptr;

        for (int r = 0; r < batch; ++r) {
            const double* g = gates.row(r);
            const double* tc = tanh_c.row(r);
            const double* cp = c_prev ? c_prev->row(r) : nullptr;
            const double* dhr = dh.row(r);
            double* dcr = dc.row(r);
            double* dg = dgates.row(r);
            for (int j = 0; j < h; ++j) {
                const double gi = g[j], gf = g[h + j], gg = g[2 * h + j], go = g[3 * h + j];
                const double dct = dcr[j] + dhr[j] * go * (1.0 - tc[j] * tc[j]);
                const double dout = dhr[j] * tc[j];
                dg[j] = dct * gg * gi * (1.0 - gi);
                dg[h + j] = dct * (cp ? cp[j] : 0.0) * gf * (1.0 - gf);
                dg[2 * h + j] = dct * gi * (1.0 - gg * gg);
                dg[3 * h + j] = dout * go * (1.0 - go);
                dcr[j] = dct * gf; // carries to step s-1
            }
        }

        if (grads) {
            const int block = step_order[s];
            gemm_tn(p.input, 4 * h, batch, x.a.data() + block * p.input, x.cols,
                    dgates.a.data(), dgates.cols, grads->dwx.a.data(), grads->dwx.cols, true);
            if (h_prev)
                gemm_tn(h, 4 * h, batch, h_prev->a.data(), h_prev->cols, dgates.a.data(),
                        dgates.cols, grads->dwh.a.data(), grads->dwh.cols, true);
            for (int r = 0; r < batch; ++r) {
                const double* dg = dgates.row(r);
                for (int j = 0; j < 4 * h; ++j) grads->db[j] += dg[j];
            }
        }

        // dh_{t-1} = dgates * Wh^T
        if (s > 0)
            gemm_nt(batch, h, 4 * h, dgates.a.data(), dgates.cols, p.wh.a.data(), p.wh.cols,
                    dh.a.data(), dh.cols, false);
    }
}

} // namespace msim::gan
