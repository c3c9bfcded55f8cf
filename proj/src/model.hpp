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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "matrix.hpp"

namespace addq {

// Weight grouping geometry. A group is g consecutive weights along the input
// dimension within one output row; group index = row * (d_in/g) + column
// block. All rows therefore share the column block's Hessian.
struct GroupLayout {
    int64_t d_out = 0;
    int64_t d_in = 0;
    int64_t g = 0;

    int64_t blocks() const {
        return d_in / g;
    }
    int64_t groups() const {
        return d_out * blocks();
    }
    int64_t block_of(int64_t group_index) const {
        return group_index % blocks();
    }
    int64_t row_of(int64_t group_index) const {
        return group_index / blocks();
    }
    void validate() const;
};

// M codebooks of K entries, each entry a g-vector. Entries are kept in
// double; the serialized artifact stores them as float32.
struct CodebookSet {
    int64_t M = 0;
    int64_t K = 0;
    int64_t g = 0;
    std::vector<double> entries; // [m][k][g]

    CodebookSet() = default;
    CodebookSet(int64_t m, int64_t k, int64_t gg)
            : M(m), K(k), g(gg),
              entries(static_cast<size_t>(m * k * gg), 0.0) {}

    const double* entry(int64_t m, int64_t k) const {
        return entries.data() + (m * K + k) * g;
    }
    double* entry(int64_t m, int64_t k) {
        return entries.data() + (m * K + k) * g;
    }
    void validate() const;
};

// Per-group discrete assignments: one index into each codebook.
struct CodeMatrix {
    int64_t N = 0;
    int64_t M = 0;
    std::vector<int32_t> codes; // [N][M]

    CodeMatrix() = default;
    CodeMatrix(int64_t n, int64_t m)
            : N(n), M(m), codes(static_cast<size_t>(n * m), 0) {}

    const int32_t* group(int64_t i) const {
        return codes.data() + i * M;
    }
    int32_t* group(int64_t i) {
        return codes.data() + i * M;
    }
    void validate(int64_t K) const;
};

// One quantization instance: weights, calibration activations, group size.
struct LayerProblem {
    DenseMatrix W; // d_out x d_in
    DenseMatrix X; // n x d_in
    int64_t g = 0;

    GroupLayout layout() const {
        return GroupLayout{W.rows, W.cols, g};
    }
    void validate() const;
};

// Sum of the M selected codewords; pure lookup plus (M-1) vector additions.
void dequantize_group(
        const CodebookSet& cb,
        std::span<const int32_t> code,
        double* out);

// N x g view of W under the layout.
Mat64 extract_groups(const DenseMatrix& W, const GroupLayout& layout);

// Per-group reconstructions, N x g.
Mat64 reconstruct_groups(const CodebookSet& cb, const CodeMatrix& codes);

// Full reconstructed matrix. `scales`, when non-null, holds d_out per-row
// factors applied after dequantization.
DenseMatrix reconstruct_matrix(
        const CodebookSet& cb,
        const CodeMatrix& codes,
        const GroupLayout& layout,
        const float* scales = nullptr);

// rho = N / K^M, computed in floating point once K^M leaves exact range.
double representational_ratio(int64_t N, int64_t K, int64_t M);

// || X W^T - X What^T ||_F^2 with 64-bit accumulation.
double layer_loss(
        const DenseMatrix& X,
        const DenseMatrix& W,
        const DenseMatrix& What);

// (w - what)^T H (w - what) for one group; H must be symmetric within 1e-6.
double group_loss(
        std::span<const double> w,
        std::span<const double> what,
        const Mat64& H);

// Quadratic form v^T H v without the symmetry check (hot path; callers hold
// banks whose blocks are symmetric by construction).
double quad_form(const double* v, const Mat64& H);

// Mean over groups of squared Euclidean error, (1/N) sum ||w_i - what_i||^2.
double weight_mse(const Mat64& groups, const Mat64& recon);

} // namespace addq
