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
#include <span>
#include <vector>

#include "errors.hpp"

namespace addq {

// Plain Adam with bias correction; moments and updates in 64-bit.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    int64_t t = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;

    AdamState(size_t n, double b1, double b2, double e)
            : m(n, 0.0), v(n, 0.0), beta1(b1), beta2(b2), eps(e) {}

    void step(double lr, std::span<const double> grad, std::span<double> params) {
        ADDQ_CHECK(grad.size() == m.size() && params.size() == m.size(),
                   invalid_argument, "adam buffers have mismatched sizes");
        t += 1;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(t));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(t));
        for (size_t i = 0; i < m.size(); ++i) {
            const double gi = grad[i];
            m[i] = beta1 * m[i] + (1.0 - beta1) * gi;
            v[i] = beta2 * v[i] + (1.0 - beta2) * gi * gi;
            const double mhat = m[i] / bc1;
            const double vhat = v[i] / bc2;
            params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
};

} // namespace addq
