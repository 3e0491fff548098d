#pragma once

#include <cassert>
#include <cstring>
#include <vector>

namespace msim::gan {

// Row-major dense matrix. Training sits on three gemm variants below; the
// loop orders are chosen so the inner loop vectorizes.
struct Mat {
    int rows = 0;
    int cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    // shape change only; contents are whatever the next writer leaves there
    void resize(int r, int c) {
        const std::size_t n = static_cast<std::size_t>(r) * c;
        rows = r;
        cols = c;
        if (a.size() != n) a.resize(n);
    }
    void zero() { std::memset(a.data(), 0, a.size() * sizeof(double)); }

    double* row(int r) { return a.data() + static_cast<std::size_t>(r) * cols; }
    const double* row(int r) const { return a.data() + static_cast<std::size_t>(r) * cols; }
    double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
    double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

// C[m x n] (+)= A[m x k] * B[k x n]
inline void gemm_nn(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
                    double* C, int ldc, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        double* c = C + static_cast<std::size_t>(i) * ldc;
        if (!accumulate)
            for (int j = 0; j < n; ++j) c[j] = 0.0;
        const double* a = A + static_cast<std::size_t>(i) * lda;
        for (int p = 0; p < k; ++p) {
            const double av = a[p];
            const double* b = B + static_cast<std::size_t>(p) * ldb;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

// C[m x n] (+)= A[m x k] * B^T, with B stored [n x k]
inline void gemm_nt(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
                    double* C, int ldc, bool accumulate) {
    for (int i = 0; i < m; ++i) {
        const double* a = A + static_cast<std::size_t>(i) * lda;
        double* c = C + static_cast<std::size_t>(i) * ldc;
        for (int j = 0; j < n; ++j) {
            const double* b = B + static_cast<std::size_t>(j) * ldb;
            double sum = 0.0;
            for (int p = 0; p < k; ++p) sum += a[p] * b[p];
            c[j] = accumulate ? c[j] + sum : sum;
        }
    }
}

// C[m x n] (+)= A^T * B, with A stored [k x m] (the batch-gradient pattern)
inline void gemm_tn(int m, int n, int k, const double* A, int lda, const double* B, int ldb,
                    double* C, int ldc, bool accumulate) {
    if (!accumulate)
        for (int i = 0; i < m; ++i)
            std::memset(C + static_cast<std::size_t>(i) * ldc, 0, sizeof(double) * n);
    for (int p = 0; p < k; ++p) {
        const double* a = A + static_cast<std::size_t>(p) * lda;
        const double* b = B + static_cast<std::size_t>(p) * ldb;
        for (int i = 0; i < m; ++i) {
            const double av = a[i];
            if (av == 0.0) continue;
            double* c = C + static_cast<std::size_t>(i) * ldc;
            for (int j = 0; j < n; ++j) c[j] += av * b[j];
        }
    }
}

} // namespace msim::gan
