// Copyright (c) the addq authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "model.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace addq {

void GroupLayout::validate() const {
    ADDQ_CHECK(d_out >= 1 && d_in >= 1 && g >= 1, invalid_argument,
               "layout dimensions must be positive");
    ADDQ_CHECK(d_in % g == 0, invalid_argument,
               "group size must divide the input dimension");
}

void CodebookSet::validate() const {
    ADDQ_CHECK(M >= 1 && K >= 1 && g >= 1, invalid_argument,
               "codebook set needs M >= 1, K >= 1, g >= 1");
    ADDQ_CHECK(entries.size() == static_cast<size_t>(M * K * g),
               invalid_argument, "codebook entry buffer has the wrong size");
    for (double v : entries) {
        ADDQ_CHECK(std::isfinite(v), numeric, "codebook entry is not finite");
    }
}

void CodeMatrix::validate(int64_t K) const {
    ADDQ_CHECK(codes.size() == static_cast<size_t>(N * M), invalid_argument,
               "code buffer has the wrong size");
    for (int32_t c : codes) {
        ADDQ_CHECK(c >= 0 && c < K, invalid_argument,
                   "code index " + std::to_string(c) + " out of range [0, " +
                           std::to_string(K) + ")");
    }
}

void LayerProblem::validate() const {
    layout().validate();
    ADDQ_CHECK(X.cols == W.cols, invalid_argument,
               "activation columns must match weight columns");
    ADDQ_CHECK(X.rows >= 1, invalid_argument,
               "calibration activations need at least one row");
    ADDQ_CHECK(all_finite(W) && all_finite(X), numeric,
               "layer inputs must be finite");
}

void dequantize_group(
        const CodebookSet& cb,
        std::span<const int32_t> code,
        double* out) {
    ADDQ_CHECK(static_cast<int64_t>(code.size()) == cb.M, invalid_argument,
               "code length must equal the codebook count");
    for (int64_t m = 0; m < cb.M; ++m) {
        ADDQ_CHECK(code[m] >= 0 && code[m] < cb.K, invalid_argument,
                   "code index out of range");
    }
    std::memcpy(out, cb.entry(0, code[0]),
                static_cast<size_t>(cb.g) * sizeof(double));
    for (int64_t m = 1; m < cb.M; ++m) {
        const double* e = cb.entry(m, code[m]);
        for (int64_t j = 0; j < cb.g; ++j) {
            out[j] += e[j];
        }
    }
}

Mat64 extract_groups(const DenseMatrix& W, const GroupLayout& layout) {
    layout.validate();
    ADDQ_CHECK(W.rows == layout.d_out && W.cols == layout.d_in,
               invalid_argument, "weight shape does not match layout");
    const int64_t blocks = layout.blocks();
    Mat64 out(layout.groups(), layout.g);
    for (int64_t r = 0; r < layout.d_out; ++r) {
        const float* src = W.row(r);
        for (int64_t b = 0; b < blocks; ++b) {
            double* dst = out.row(r * blocks + b);
            for (int64_t j = 0; j < layout.g; ++j) {
                dst[j] = src[b * layout.g + j];
            }
        }
    }
    return out;
}

Mat64 reconstruct_groups(const CodebookSet& cb, const CodeMatrix& codes) {
    ADDQ_CHECK(codes.M == cb.M, invalid_argument,
               "code width must equal the codebook count");
    Mat64 out(codes.N, cb.g);
    for (int64_t i = 0; i < codes.N; ++i) {
        dequantize_group(cb, std::span(codes.group(i), codes.M), out.row(i));
    }
    return out;
}

DenseMatrix reconstruct_matrix(
        const CodebookSet& cb,
        const CodeMatrix& codes,
        const GroupLayout& layout,
        const float* scales) {
    layout.validate();
    ADDQ_CHECK(codes.N == layout.groups(), invalid_argument,
               "code count does not match layout group count");
    ADDQ_CHECK(cb.g == layout.g, invalid_argument,
               "codebook group size does not match layout");
    const int64_t blocks = layout.blocks();
    DenseMatrix out(layout.d_out, layout.d_in);
    std::vector<double> buf(static_cast<size_t>(layout.g));
    for (int64_t i = 0; i < codes.N; ++i) {
        dequantize_group(cb, std::span(codes.group(i), codes.M), buf.data());
        int64_t r = i / blocks;
        int64_t b = i % blocks;
        float* dst = out.row(r) + b * layout.g;
        if (scales != nullptr) {
            for (int64_t j = 0; j < layout.g; ++j) {
                dst[j] = static_cast<float>(buf[j] * scales[r]);
            }
        } else {
            for (int64_t j = 0; j < layout.g; ++j) {
                dst[j] = static_cast<float>(buf[j]);
            }
        }
    }
    return out;
}

double representational_ratio(int64_t N, int64_t K, int64_t M) {
    ADDQ_CHECK(K >= 1 && M >= 1, invalid_argument,
               "representational ratio needs K >= 1 and M >= 1");
    ADDQ_CHECK(N >= 0, invalid_argument, "group count must be non-negative");
    // exact while K^M < 2^53, then the usual double rounding takes over
    double capacity = 1.0;
    for (int64_t m = 0; m < M; ++m) {
        capacity *= static_cast<double>(K);
    }
    return static_cast<double>(N) / capacity;
}

double layer_loss(
        const DenseMatrix& X,
        const DenseMatrix& W,
        const DenseMatrix& What) {
    ADDQ_CHECK(W.rows == What.rows && W.cols == What.cols, invalid_argument,
               "weight and reconstruction shapes differ");
    ADDQ_CHECK(X.cols == W.cols, invalid_argument,
               "activation columns must match weight columns");
    const int64_t d = W.cols;
    // Gram route: ||X E^T||_F^2 = sum_r e_r (X^T X) e_r^T
    Mat64 gram(d, d);
    for (int64_t r = 0; r < X.rows; ++r) {
        const float* x = X.row(r);
        for (int64_t i = 0; i < d; ++i) {
            const double xi = x[i];
            double* grow = gram.row(i);
            for (int64_t j = i; j < d; ++j) {
                grow[j] += xi * static_cast<double>(x[j]);
            }
        }
    }
    for (int64_t i = 0; i < d; ++i) {
        for (int64_t j = 0; j < i; ++j) {
            gram.at(i, j) = gram.at(j, i);
        }
    }
    std::vector<double> e(static_cast<size_t>(d));
    double total = 0.0;
    for (int64_t r = 0; r < W.rows; ++r) {
        const float* w = W.row(r);
        const float* wh = What.row(r);
        for (int64_t j = 0; j < d; ++j) {
            e[static_cast<size_t>(j)] =
                    static_cast<double>(w[j]) - static_cast<double>(wh[j]);
        }
        for (int64_t i = 0; i < d; ++i) {
            const double* grow = gram.row(i);
            double acc = 0.0;
            for (int64_t j = 0; j < d; ++j) {
                acc += grow[j] * e[static_cast<size_t>(j)];
            }
            total += e[static_cast<size_t>(i)] * acc;
        }
    }
    return total;
}

double quad_form(const double* v, const Mat64& H) {
    const int64_t g = H.rows;
    double total = 0.0;
    for (int64_t i = 0; i < g; ++i) {
        const double* hrow = H.row(i);
        double acc = 0.0;
        for (int64_t j = 0; j < g; ++j) {
            acc += hrow[j] * v[j];
        }
        total += v[i] * acc;
    }
    return total;
}

double group_loss(
        std::span<const double> w,
        std::span<const double> what,
        const Mat64& H) {
    const int64_t g = static_cast<int64_t>(w.size());
    ADDQ_CHECK(static_cast<int64_t>(what.size()) == g, invalid_argument,
               "group vectors must have equal length");
    ADDQ_CHECK(H.rows == g && H.cols == g, invalid_argument,
               "H must be g x g");
    for (int64_t i = 0; i < g; ++i) {
        for (int64_t j = i + 1; j < g; ++j) {
            ADDQ_CHECK(std::fabs(H.at(i, j) - H.at(j, i)) <= 1e-6,
                       invalid_argument, "H is not symmetric within 1e-6");
        }
    }
    std::vector<double> e(static_cast<size_t>(g));
    for (int64_t i = 0; i < g; ++i) {
        e[static_cast<size_t>(i)] = w[i] - what[i];
    }
    return quad_form(e.data(), H);
}

double weight_mse(const Mat64& groups, const Mat64& recon) {
    ADDQ_CHECK(groups.rows == recon.rows && groups.cols == recon.cols,
               invalid_argument, "group matrices must have equal shape");
    if (groups.rows == 0) {
        return 0.0;
    }
    double total = 0.0;
    for (int64_t i = 0; i < groups.rows; ++i) {
        const double* a = groups.row(i);
        const double* b = recon.row(i);
        for (int64_t j = 0; j < groups.cols; ++j) {
            double d = a[j] - b[j];
            total += d * d;
        }
    }
    return total / static_cast<double>(groups.rows);
}

} // namespace addq
