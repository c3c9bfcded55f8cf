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

#include "kmeans.hpp"

#include <algorithm>
#include <cstring>
#include <limits>

#include "parallel.hpp"
#include "rng.hpp"

namespace addq {

namespace {

double dist2(const double* a, const double* b, int64_t g) {
    double acc = 0.0;
    for (int64_t j = 0; j < g; ++j) {
        double d = a[j] - b[j];
        acc += d * d;
    }
    return acc;
}

} // namespace

Mat64 kmeanspp_seed(const Mat64& points, int64_t K, uint64_t seed) {
    const int64_t n = points.rows;
    const int64_t g = points.cols;
    ADDQ_CHECK(n >= 1, invalid_argument, "k-means++ needs at least one point");
    ADDQ_CHECK(K >= 1, invalid_argument, "k-means++ needs K >= 1");

    Prng rng(seed, kStreamKmeansSeed);
    Mat64 centroids(K, g);
    std::vector<double> d2(static_cast<size_t>(n),
                           std::numeric_limits<double>::infinity());

    int64_t first = static_cast<int64_t>(rng.next_index(static_cast<uint64_t>(n)));
    std::memcpy(centroids.row(0), points.row(first),
                static_cast<size_t>(g) * sizeof(double));
    for (int64_t i = 0; i < n; ++i) {
        d2[static_cast<size_t>(i)] = dist2(points.row(i), centroids.row(0), g);
    }

    for (int64_t k = 1; k < K; ++k) {
        double total = 0.0;
        for (double v : d2) {
            total += v;
        }
        int64_t pick;
        if (total <= 0.0) {
            // no D^2 mass left: duplicate a uniformly sampled point
            pick = static_cast<int64_t>(rng.next_index(static_cast<uint64_t>(n)));
        } else {
            double r = rng.next_uniform() * total;
            double acc = 0.0;
            pick = n - 1;
            for (int64_t i = 0; i < n; ++i) {
                acc += d2[static_cast<size_t>(i)];
                if (acc > r) {
                    pick = i;
                    break;
                }
            }
        }
        std::memcpy(centroids.row(k), points.row(pick),
                    static_cast<size_t>(g) * sizeof(double));
        for (int64_t i = 0; i < n; ++i) {
            double d = dist2(points.row(i), centroids.row(k), g);
            if (d < d2[static_cast<size_t>(i)]) {
                d2[static_cast<size_t>(i)] = d;
            }
        }
    }
    return centroids;
}

void assign_nearest(
        const Mat64& points,
        const Mat64& centroids,
        int32_t* out_assign,
        int threads) {
    const int64_t g = points.cols;
    const int64_t K = centroids.rows;
    ADDQ_CHECK(centroids.cols == g, invalid_argument,
               "centroid dimension does not match points");
    parallel_for(points.rows, threads, [&](int64_t begin, int64_t end) {
        for (int64_t i = begin; i < end; ++i) {
            const double* p = points.row(i);
            int32_t best = 0;
            double best_d = dist2(p, centroids.row(0), g);
            for (int64_t k = 1; k < K; ++k) {
                double d = dist2(p, centroids.row(k), g);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<int32_t>(k);
                }
            }
            out_assign[i] = best;
        }
    });
}

ClusterState lloyd(
        const Mat64& points,
        Mat64 centroids,
        const KmeansConfig& cfg) {
    const int64_t n = points.rows;
    const int64_t g = points.cols;
    const int64_t K = centroids.rows;
    ADDQ_CHECK(n >= 1 && K >= 1, invalid_argument,
               "lloyd needs points and centroids");
    ADDQ_CHECK(centroids.cols == g, invalid_argument,
               "centroid dimension does not match points");
    ADDQ_CHECK(cfg.max_iters >= 1, invalid_argument, "max_iters must be >= 1");

    ClusterState state;
    state.centroids = std::move(centroids);
    state.assign.assign(static_cast<size_t>(n), 0);
    std::vector<int32_t> prev_assign;
    std::vector<double> point_d2(static_cast<size_t>(n), 0.0);
    double prev_inertia = std::numeric_limits<double>::infinity();

    for (int iter = 0; iter < cfg.max_iters; ++iter) {
        assign_nearest(points, state.centroids, state.assign.data(),
                       cfg.threads);
        parallel_for(n, cfg.threads, [&](int64_t begin, int64_t end) {
            for (int64_t i = begin; i < end; ++i) {
                point_d2[static_cast<size_t>(i)] = dist2(
                        points.row(i),
                        state.centroids.row(state.assign[static_cast<size_t>(i)]),
                        g);
            }
        });
        double inertia = 0.0;
        for (double v : point_d2) {
            inertia += v;
        }
        state.inertia = inertia;

        if (!prev_assign.empty() && prev_assign == state.assign) {
            break; // assignment fixpoint
        }
        if (std::isfinite(prev_inertia) && prev_inertia > 0.0 &&
            (prev_inertia - inertia) / prev_inertia < cfg.tol) {
            break;
        }
        if (prev_inertia == 0.0) {
            break;
        }
        prev_assign = state.assign;
        prev_inertia = inertia;
        if (iter + 1 == cfg.max_iters) {
            break; // keep (assign, inertia) consistent with centroids
        }

        // mean update, accumulated in point order
        Mat64 sums(K, g);
        std::vector<int64_t> counts(static_cast<size_t>(K), 0);
        for (int64_t i = 0; i < n; ++i) {
            int32_t k = state.assign[static_cast<size_t>(i)];
            counts[static_cast<size_t>(k)] += 1;
            const double* p = points.row(i);
            double* s = sums.row(k);
            for (int64_t j = 0; j < g; ++j) {
                s[j] += p[j];
            }
        }
        std::vector<bool> taken(static_cast<size_t>(n), false);
        for (int64_t k = 0; k < K; ++k) {
            if (counts[static_cast<size_t>(k)] > 0) {
                const double inv =
                        1.0 / static_cast<double>(counts[static_cast<size_t>(k)]);
                double* c = state.centroids.row(k);
                const double* s = sums.row(k);
                for (int64_t j = 0; j < g; ++j) {
                    c[j] = s[j] * inv;
                }
            } else {
                // reseed to the farthest point not already used this round
                int64_t far = -1;
                double far_d = -1.0;
                for (int64_t i = 0; i < n; ++i) {
                    if (taken[static_cast<size_t>(i)]) {
                        continue;
                    }
                    if (point_d2[static_cast<size_t>(i)] > far_d) {
                        far_d = point_d2[static_cast<size_t>(i)];
                        far = i;
                    }
                }
                if (far >= 0) {
                    taken[static_cast<size_t>(far)] = true;
                    std::memcpy(state.centroids.row(k), points.row(far),
                                static_cast<size_t>(g) * sizeof(double));
                }
            }
        }
    }
    return state;
}

InitResult residual_init(
        const Mat64& groups,
        int64_t M,
        int64_t K,
        uint64_t seed,
        const KmeansConfig& cfg,
        const RefineHook& refine) {
    ADDQ_CHECK(M >= 1, invalid_argument, "residual_init needs M >= 1");
    const int64_t n = groups.rows;
    const int64_t g = groups.cols;

    Mat64 targets = groups;
    InitResult out;
    out.codebooks = CodebookSet(M, K, g);
    out.codes = CodeMatrix(n, M);

    for (int64_t m = 0; m < M; ++m) {
        uint64_t km_seed = derive_stream(seed, kStreamCodebookFit, static_cast<uint64_t>(m));
        Mat64 cents = kmeanspp_seed(targets, K, km_seed);
        ClusterState state = lloyd(targets, std::move(cents), cfg);
        if (refine) {
            state = refine(m, targets, std::move(state));
        }
        for (int64_t k = 0; k < K; ++k) {
            std::memcpy(out.codebooks.entry(m, k), state.centroids.row(k),
                        static_cast<size_t>(g) * sizeof(double));
        }
        for (int64_t i = 0; i < n; ++i) {
            int32_t k = state.assign[static_cast<size_t>(i)];
            out.codes.group(i)[m] = k;
            double* t = targets.row(i);
            const double* c = state.centroids.row(k);
            for (int64_t j = 0; j < g; ++j) {
                t[j] -= c[j];
            }
        }
    }
    return out;
}

} // namespace addq
