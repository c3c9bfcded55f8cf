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

#include "tensor_io.hpp"

#include <cstring>
#include <fstream>
#include <limits>

namespace addq {

namespace {

constexpr char kMatrixMagic[8] = {'A', 'D', 'D', 'Q', 'M', 'A', 'T', '0'};
constexpr char kArtifactMagic[4] = {'A', 'Q', 'V', '1'};
constexpr uint8_t kVersion = 1;
constexpr uint8_t kDtypeFloat32 = 1;
constexpr int64_t kMaxCodebookSize = 256;

void put_u32le(std::string& out, uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64le(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
    }
}

void put_f32le(std::string& out, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32le(out, bits);
}

class Reader {
  public:
    Reader(const uint8_t* data, size_t size, std::string path)
            : data_(data), size_(size), path_(std::move(path)) {}

    uint8_t u8(const char* field) {
        need(1, field);
        return data_[pos_++];
    }
    uint32_t u32(const char* field) {
        need(4, field);
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(data_[pos_ + i]) << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    uint64_t u64(const char* field) {
        need(8, field);
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<uint64_t>(data_[pos_ + i]) << (8 * i);
        }
        pos_ += 8;
        return v;
    }
    float f32(const char* field) {
        uint32_t bits = u32(field);
        float v;
        std::memcpy(&v, &bits, 4);
        return v;
    }
    void bytes(void* dst, size_t n, const char* field) {
        need(n, field);
        std::memcpy(dst, data_ + pos_, n);
        pos_ += n;
    }
    size_t remaining() const {
        return size_ - pos_;
    }
    [[noreturn]] void fail(const char* field, const std::string& why) const {
        raise(ErrorKind::data,
              path_ + ": bad " + std::string(field) + " (" + why + ")");
    }

  private:
    void need(size_t n, const char* field) {
        if (size_ - pos_ < n) {
            fail(field, "file truncated");
        }
    }

    const uint8_t* data_;
    size_t size_;
    size_t pos_ = 0;
    std::string path_;
};

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    ADDQ_CHECK(in.good(), io, path + ": cannot open for reading");
    in.seekg(0, std::ios::end);
    std::streamoff size = in.tellg();
    in.seekg(0, std::ios::beg);
    std::vector<uint8_t> buf(static_cast<size_t>(size));
    if (size > 0) {
        in.read(reinterpret_cast<char*>(buf.data()), size);
    }
    ADDQ_CHECK(in.good(), io, path + ": read failed");
    return buf;
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    ADDQ_CHECK(out.good(), io, path + ": cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    ADDQ_CHECK(out.good(), io, path + ": write failed");
}

} // namespace

void validate_artifact(const QuantizedArtifact& a) {
    ADDQ_CHECK(a.d_out >= 1 && a.d_in >= 1 && a.g >= 1 && a.M >= 1 &&
                       a.K >= 1,
               data, "artifact header dimensions must be positive");
    ADDQ_CHECK(a.K <= kMaxCodebookSize, data,
               "artifact codebook size exceeds 256");
    ADDQ_CHECK(a.d_in % a.g == 0, data,
               "artifact group size must divide d_in");
    const int64_t n = a.groups();
    ADDQ_CHECK(a.codebooks.size() == static_cast<size_t>(a.M * a.K * a.g),
               data, "artifact codebook payload has the wrong size");
    ADDQ_CHECK(a.codes.size() == static_cast<size_t>(n * a.M), data,
               "artifact code payload has the wrong size");
    ADDQ_CHECK(a.scales.empty() ||
                       a.scales.size() == static_cast<size_t>(a.d_out),
               data, "artifact scale payload has the wrong size");
    for (uint8_t c : a.codes) {
        ADDQ_CHECK(c < a.K, data, "artifact code index out of range");
    }
    for (float v : a.codebooks) {
        ADDQ_CHECK(std::isfinite(v), data,
                   "artifact codebook entry is not finite");
    }
}

DenseMatrix load_matrix(const std::string& path) {
    std::vector<uint8_t> buf = read_file(path);
    Reader r(buf.data(), buf.size(), path);
    char magic[8];
    r.bytes(magic, 8, "magic");
    if (std::memcmp(magic, kMatrixMagic, 8) != 0) {
        r.fail("magic", "not an ADDQMAT0 file");
    }
    uint8_t version = r.u8("version");
    if (version != kVersion) {
        r.fail("version", "unsupported version " + std::to_string(version));
    }
    uint8_t dtype = r.u8("dtype");
    if (dtype != kDtypeFloat32) {
        r.fail("dtype", "only float32 payloads are supported");
    }
    uint8_t ndim = r.u8("ndim");
    if (ndim != 2) {
        r.fail("ndim", "only 2-D payloads are supported");
    }
    uint64_t rows = r.u64("rows");
    uint64_t cols = r.u64("cols");
    constexpr uint64_t kMaxElems =
            static_cast<uint64_t>(std::numeric_limits<int64_t>::max()) / 8;
    if (rows > kMaxElems || cols > kMaxElems ||
        (rows != 0 && cols > kMaxElems / rows)) {
        r.fail("rows", "dimensions overflow");
    }
    uint64_t elems = rows * cols;
    if (r.remaining() != elems * 4) {
        r.fail("payload", "payload size does not match rows*cols");
    }
    DenseMatrix m(static_cast<int64_t>(rows), static_cast<int64_t>(cols));
    if (elems > 0) {
        r.bytes(m.data.data(), static_cast<size_t>(elems) * 4, "payload");
    }
    ADDQ_CHECK(all_finite(m), data, path + ": payload contains non-finite values");
    return m;
}

void save_matrix(const DenseMatrix& m, const std::string& path) {
    ADDQ_CHECK(m.rows >= 0 && m.cols >= 0, invalid_argument,
               "matrix dimensions must be non-negative");
    ADDQ_CHECK(m.data.size() == static_cast<size_t>(m.rows * m.cols),
               invalid_argument, "matrix buffer has the wrong size");
    ADDQ_CHECK(all_finite(m), invalid_argument,
               "matrix contains non-finite values");
    std::string out;
    out.reserve(27 + m.data.size() * 4);
    out.append(kMatrixMagic, 8);
    out.push_back(static_cast<char>(kVersion));
    out.push_back(static_cast<char>(kDtypeFloat32));
    out.push_back(2);
    put_u64le(out, static_cast<uint64_t>(m.rows));
    put_u64le(out, static_cast<uint64_t>(m.cols));
    for (float v : m.data) {
        put_f32le(out, v);
    }
    write_file(path, out);
}

QuantizedArtifact read_artifact(const std::string& path) {
    std::vector<uint8_t> buf = read_file(path);
    Reader r(buf.data(), buf.size(), path);
    char magic[4];
    r.bytes(magic, 4, "magic");
    if (std::memcmp(magic, kArtifactMagic, 4) != 0) {
        r.fail("magic", "not an AQV1 file");
    }
    uint32_t version = r.u32("version");
    if (version != 1) {
        r.fail("version", "unsupported version " + std::to_string(version));
    }
    QuantizedArtifact a;
    a.d_out = r.u32("d_out");
    a.d_in = r.u32("d_in");
    a.g = r.u32("g");
    a.M = r.u32("M");
    a.K = r.u32("K");
    uint32_t has_scales = r.u32("has_scales");
    if (has_scales > 1) {
        r.fail("has_scales", "flag must be 0 or 1");
    }
    if (a.d_out < 1 || a.d_in < 1 || a.g < 1 || a.M < 1 || a.K < 1) {
        r.fail("header", "dimensions must be positive");
    }
    if (a.K > kMaxCodebookSize) {
        r.fail("K", "codebook size exceeds 256");
    }
    if (a.d_in % a.g != 0) {
        r.fail("g", "group size must divide d_in");
    }
    const uint64_t n = static_cast<uint64_t>(a.groups());
    const uint64_t cb_elems = static_cast<uint64_t>(a.M * a.K * a.g);
    const uint64_t expect = cb_elems * 4 + n * static_cast<uint64_t>(a.M) +
            (has_scales ? static_cast<uint64_t>(a.d_out) * 4 : 0);
    if (r.remaining() != expect) {
        r.fail("payload", "payload size does not match header");
    }
    a.codebooks.resize(static_cast<size_t>(cb_elems));
    r.bytes(a.codebooks.data(), static_cast<size_t>(cb_elems) * 4,
            "codebooks");
    a.codes.resize(static_cast<size_t>(n * static_cast<uint64_t>(a.M)));
    r.bytes(a.codes.data(), a.codes.size(), "codes");
    for (uint8_t c : a.codes) {
        if (c >= a.K) {
            raise(ErrorKind::data,
                  path + ": corrupt artifact, code index " +
                          std::to_string(c) + " >= K");
        }
    }
    if (has_scales) {
        a.scales.resize(static_cast<size_t>(a.d_out));
        r.bytes(a.scales.data(), static_cast<size_t>(a.d_out) * 4, "scales");
    }
    validate_artifact(a);
    return a;
}

void write_artifact(const QuantizedArtifact& a, const std::string& path) {
    validate_artifact(a);
    std::string out;
    out.reserve(32 + a.codebooks.size() * 4 + a.codes.size() +
                a.scales.size() * 4);
    out.append(kArtifactMagic, 4);
    put_u32le(out, 1);
    put_u32le(out, static_cast<uint32_t>(a.d_out));
    put_u32le(out, static_cast<uint32_t>(a.d_in));
    put_u32le(out, static_cast<uint32_t>(a.g));
    put_u32le(out, static_cast<uint32_t>(a.M));
    put_u32le(out, static_cast<uint32_t>(a.K));
    put_u32le(out, a.scales.empty() ? 0u : 1u);
    for (float v : a.codebooks) {
        put_f32le(out, v);
    }
    out.append(reinterpret_cast<const char*>(a.codes.data()), a.codes.size());
    for (float v : a.scales) {
        put_f32le(out, v);
    }
    write_file(path, out);
}

CodebookSet codebooks_of(const QuantizedArtifact& a) {
    CodebookSet cb(a.M, a.K, a.g);
    for (size_t i = 0; i < a.codebooks.size(); ++i) {
        cb.entries[i] = a.codebooks[i];
    }
    return cb;
}

CodeMatrix codes_of(const QuantizedArtifact& a) {
    CodeMatrix codes(a.groups(), a.M);
    for (size_t i = 0; i < a.codes.size(); ++i) {
        codes.codes[i] = a.codes[i];
    }
    return codes;
}

QuantizedArtifact make_artifact(
        const GroupLayout& layout,
        const CodebookSet& cb,
        const CodeMatrix& codes) {
    layout.validate();
    ADDQ_CHECK(cb.g == layout.g, invalid_argument,
               "codebook group size does not match layout");
    ADDQ_CHECK(codes.N == layout.groups() && codes.M == cb.M,
               invalid_argument, "codes do not match layout/codebooks");
    ADDQ_CHECK(cb.K <= kMaxCodebookSize, invalid_argument,
               "codebook size exceeds the one-byte code limit of 256");
    codes.validate(cb.K);
    QuantizedArtifact a;
    a.d_out = layout.d_out;
    a.d_in = layout.d_in;
    a.g = layout.g;
    a.M = cb.M;
    a.K = cb.K;
    a.codebooks.resize(cb.entries.size());
    for (size_t i = 0; i < cb.entries.size(); ++i) {
        a.codebooks[i] = static_cast<float>(cb.entries[i]);
    }
    a.codes.resize(codes.codes.size());
    for (size_t i = 0; i < codes.codes.size(); ++i) {
        a.codes[i] = static_cast<uint8_t>(codes.codes[i]);
    }
    return a;
}

DenseMatrix reconstruct_matrix(const QuantizedArtifact& a) {
    validate_artifact(a);
    return reconstruct_matrix(
            codebooks_of(a), codes_of(a), a.layout(),
            a.scales.empty() ? nullptr : a.scales.data());
}

} // namespace addq
