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

#include <cmath>
#include <cstdint>
#include <vector>

#include "errors.hpp"

namespace addq {

// Dense row-major float32 matrix: the storage and interchange type.
struct DenseMatrix {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<float> data;

    DenseMatrix() = default;
    DenseMatrix(int64_t r, int64_t c)
            : rows(r), cols(c), data(static_cast<size_t>(r * c), 0.0f) {}

    float* row(int64_t r) {
        return data.data() + r * cols;
    }
    const float* row(int64_t r) const {
        return data.data() + r * cols;
    }
    float& at(int64_t r, int64_t c) {
        return data[static_cast<size_t>(r * cols + c)];
    }
    float at(int64_t r, int64_t c) const {
        return data[static_cast<size_t>(r * cols + c)];
    }
};

// Row-major double matrix for internal numerics (losses and optimiser state
// accumulate in 64-bit over 32-bit stored data).
struct Mat64 {
    int64_t rows = 0;
    int64_t cols = 0;
    std::vector<double> data;

    Mat64() = default;
    Mat64(int64_t r, int64_t c)
            : rows(r), cols(c), data(static_cast<size_t>(r * c), 0.0) {}

    double* row(int64_t r) {
        return data.data() + r * cols;
    }
    const double* row(int64_t r) const {
        return data.data() + r * cols;
    }
    double& at(int64_t r, int64_t c) {
        return data[static_cast<size_t>(r * cols + c)];
    }
    double at(int64_t r, int64_t c) const {
        return data[static_cast<size_t>(r * cols + c)];
    }
};

inline bool all_finite(const DenseMatrix& m) {
    for (float v : m.data) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

inline bool all_finite(const Mat64& m) {
    for (double v : m.data) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

inline Mat64 widen(const DenseMatrix& m) {
    Mat64 out(m.rows, m.cols);
    for (size_t i = 0; i < m.data.size(); ++i) {
        out.data[i] = m.data[i];
    }
    return out;
}

inline DenseMatrix narrow(const Mat64& m) {
    DenseMatrix out(m.rows, m.cols);
    for (size_t i = 0; i < m.data.size(); ++i) {
        out.data[i] = static_cast<float>(m.data[i]);
    }
    return out;
}

} // namespace addq
