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

#include "model.hpp"

namespace addq {

// Damped block-diagonal curvature H_j = X_j^T X_j + lambda I, one g x g block
// per column block. Immutable after construction and freely shared.
struct HessianBank {
    int64_t g = 0;
    double lambda = 0.0;
    std::vector<Mat64> blocks;

    const Mat64& block(int64_t b) const {
        return blocks[static_cast<size_t>(b)];
    }
};

// lambda = damp_factor * mean of the undamped diagonal, taken over all d_in
// entries. Refuses all-zero calibration data (lambda would be 0).
HessianBank build_hessian_bank(
        const DenseMatrix& X,
        int64_t g,
        double damp_factor = 0.01);

const Mat64& block_for_group(
        const HessianBank& bank,
        int64_t group_index,
        const GroupLayout& layout);

// Identity blocks; used wherever the Euclidean metric stands in for H.
HessianBank identity_bank(int64_t g, int64_t blocks);

} // namespace addq
