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

#include "hessian.hpp"

namespace addq {

HessianBank build_hessian_bank(
        const DenseMatrix& X,
        int64_t g,
        double damp_factor) {
    ADDQ_CHECK(g >= 1, invalid_argument, "group size must be positive");
    ADDQ_CHECK(X.rows >= 1 && X.cols >= 1, invalid_argument,
               "calibration matrix must be non-empty");
    ADDQ_CHECK(X.cols % g == 0, invalid_argument,
               "group size must divide the activation columns");
    ADDQ_CHECK(damp_factor > 0.0, invalid_argument,
               "damping factor must be positive");

    const int64_t blocks = X.cols / g;
    HessianBank bank;
    bank.g = g;
    bank.blocks.assign(static_cast<size_t>(blocks), Mat64(g, g));

    // undamped blocks, upper triangle then mirrored (exactly symmetric)
    for (int64_t r = 0; r < X.rows; ++r) {
        const float* x = X.row(r);
        for (int64_t b = 0; b < blocks; ++b) {
            Mat64& h = bank.blocks[static_cast<size_t>(b)];
            const float* xb = x + b * g;
            for (int64_t i = 0; i < g; ++i) {
                const double xi = xb[i];
                double* hrow = h.row(i);
                for (int64_t j = i; j < g; ++j) {
                    hrow[j] += xi * static_cast<double>(xb[j]);
                }
            }
        }
    }
    for (auto& h : bank.blocks) {
        for (int64_t i = 0; i < g; ++i) {
            for (int64_t j = 0; j < i; ++j) {
                h.at(i, j) = h.at(j, i);
            }
        }
    }

    double diag_sum = 0.0;
    for (const auto& h : bank.blocks) {
        for (int64_t i = 0; i < g; ++i) {
            diag_sum += h.at(i, i);
        }
    }
    double diag_mean = diag_sum / static_cast<double>(X.cols);
    ADDQ_CHECK(diag_mean > 0.0, data,
               "degenerate calibration data: all activations are zero");
    bank.lambda = damp_factor * diag_mean;
    for (auto& h : bank.blocks) {
        for (int64_t i = 0; i < g; ++i) {
            h.at(i, i) += bank.lambda;
        }
    }
    return bank;
}

const Mat64& block_for_group(
        const HessianBank& bank,
        int64_t group_index,
        const GroupLayout& layout) {
    ADDQ_CHECK(group_index >= 0 && group_index < layout.groups(),
               invalid_argument, "group index out of range");
    ADDQ_CHECK(static_cast<int64_t>(bank.blocks.size()) == layout.blocks(),
               invalid_argument, "bank block count does not match layout");
    return bank.block(layout.block_of(group_index));
}

HessianBank identity_bank(int64_t g, int64_t blocks) {
    HessianBank bank;
    bank.g = g;
    bank.lambda = 0.0;
    bank.blocks.assign(static_cast<size_t>(blocks), Mat64(g, g));
    for (auto& h : bank.blocks) {
        for (int64_t i = 0; i < g; ++i) {
            h.at(i, i) = 1.0;
        }
    }
    return bank;
}

} // namespace addq
