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
#include <functional>

#include "model.hpp"

namespace addq {

struct KmeansConfig {
    int max_iters = 25;
    double tol = 1e-4;
    int threads = 1;
};

struct ClusterState {
    Mat64 centroids;             // K x g
    std::vector<int32_t> assign; // N
    double inertia = 0.0;        // sum of point-to-assigned-centroid costs
};

// k-means++ seeding: first centroid uniform, then D^2-weighted. When the
// remaining D^2 mass is zero (K > N, or duplicate points) surplus centroids
// duplicate uniformly sampled points.
Mat64 kmeanspp_seed(const Mat64& points, int64_t K, uint64_t seed);

// Euclidean nearest-centroid assignment, ties to the smallest index.
void assign_nearest(
        const Mat64& points,
        const Mat64& centroids,
        int32_t* out_assign,
        int threads = 1);

// Lloyd iterations until assignment fixpoint, relative inertia improvement
// below tol, or max_iters. Empty clusters are reseeded to the farthest point.
ClusterState lloyd(
        const Mat64& points,
        Mat64 centroids,
        const KmeansConfig& cfg);

// Called after fitting codebook m, before residuals are formed; this is where
// output-aware refinement plugs in.
using RefineHook = std::function<ClusterState(
        int64_t codebook_index,
        const Mat64& targets,
        ClusterState state)>;

struct InitResult {
    CodebookSet codebooks;
    CodeMatrix codes;
};

// Sequential residual fitting: codebook m is fitted (k-means++, Lloyd, then
// the optional refine hook) on the residuals left by codebooks 0..m-1.
InitResult residual_init(
        const Mat64& groups,
        int64_t M,
        int64_t K,
        uint64_t seed,
        const KmeansConfig& cfg,
        const RefineHook& refine = {});

} // namespace addq
