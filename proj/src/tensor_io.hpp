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

#include <string>

#include "model.hpp"

namespace addq {

// Matrix container, byte-exact:
//   bytes 0..7   magic "ADDQMAT0"
//   byte  8      version (1)
//   byte  9      dtype code (1 = float32 little-endian)
//   byte  10     ndim (2)
//   bytes 11..18 rows, u64 LE
//   bytes 19..26 cols, u64 LE
//   bytes 27..   rows*cols float32 LE, row-major
//
// Quantized-layer container "AQV1", byte-exact:
//   bytes 0..3   magic "AQV1"
//   7 x u32 LE   version (1), d_out, d_in, g, M, K, has_scales (0/1)
//   M*K*g        float32 LE codebook entries, codebook-major then entry-major
//   N*M          u8 code indices, group-major (group = row * d_in/g + block)
//   d_out        float32 LE per-row scales, present iff has_scales
//
// K is capped at 256 so codes always fit one byte.

struct QuantizedArtifact {
    int64_t d_out = 0;
    int64_t d_in = 0;
    int64_t g = 0;
    int64_t M = 0;
    int64_t K = 0;
    std::vector<float> codebooks; // M*K*g
    std::vector<uint8_t> codes;   // N*M
    std::vector<float> scales;    // empty or d_out

    int64_t groups() const {
        return g > 0 ? d_out * (d_in / g) : 0;
    }
    GroupLayout layout() const {
        return GroupLayout{d_out, d_in, g};
    }
};

void validate_artifact(const QuantizedArtifact& a);

DenseMatrix load_matrix(const std::string& path);
void save_matrix(const DenseMatrix& m, const std::string& path);

QuantizedArtifact read_artifact(const std::string& path);
void write_artifact(const QuantizedArtifact& a, const std::string& path);

// double <-> float32 bridges between the in-memory model and the container
CodebookSet codebooks_of(const QuantizedArtifact& a);
CodeMatrix codes_of(const QuantizedArtifact& a);
QuantizedArtifact make_artifact(
        const GroupLayout& layout,
        const CodebookSet& cb,
        const CodeMatrix& codes);

DenseMatrix reconstruct_matrix(const QuantizedArtifact& a);

} // namespace addq
