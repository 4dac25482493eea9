// Copyright 2026 The ced authors
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

#include "ced/cube.hpp"

#include <cstring>
#include <fstream>

namespace ced {

namespace {

// Little-endian scalar I/O; byte-by-byte so the format is host-independent.
template <typename T>
void put_le(std::string& out, T value) {
    static_assert(std::is_unsigned_v<T>);
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
    }
}

template <typename T>
T get_le(const unsigned char* p) {
    T value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<T>(p[i]) << (8 * i);
    }
    return value;
}

std::uint32_t f32_bits(float x) {
    std::uint32_t b;
    std::memcpy(&b, &x, 4);
    return b;
}

std::uint64_t f64_bits(double x) {
    std::uint64_t b;
    std::memcpy(&b, &x, 8);
    return b;
}

float bits_f32(std::uint32_t b) {
    float x;
    std::memcpy(&x, &b, 4);
    return x;
}

double bits_f64(std::uint64_t b) {
    double x;
    std::memcpy(&x, &b, 8);
    return x;
}

}  // namespace

int DataCube::channels() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks.front().rows());
}

int DataCube::bins() const {
    return blocks.empty() ? 0 : static_cast<int>(blocks.front().cols());
}

void DataCube::validate() const {
    if (blocks.empty()) throw DataError("data cube has no blocks");
    if (precision != 32 && precision != 64) {
        throw DataError("cube precision must be 32 or 64");
    }
    const int n = channels();
    const int k = bins();
    if (n < 1 || k < 1) throw DataError("empty cube block");
    for (const auto& b : blocks) {
        if (b.rows() != n || b.cols() != k) {
            throw DataError("cube blocks have inconsistent shape");
        }
    }
}

void quantize_to_precision(DataCube& cube) {
    if (cube.precision != 32) return;
    for (auto& block : cube.blocks) {
        double* flat = reinterpret_cast<double*>(block.data());
        const Eigen::Index count = 2 * block.size();
        for (Eigen::Index i = 0; i < count; ++i) {
            const float narrowed = static_cast<float>(flat[i]);
            flat[i] = static_cast<double>(narrowed);
        }
    }
}

void write_cube(const std::string& path, const DataCube& cube) {
    cube.validate();
    std::string bytes;
    const std::uint32_t k = static_cast<std::uint32_t>(cube.bins());
    const std::uint32_t nblocks = static_cast<std::uint32_t>(cube.blocks.size());
    const std::uint16_t n = static_cast<std::uint16_t>(cube.channels());
    bytes.reserve(kCubeHeaderBytes + static_cast<std::size_t>(nblocks) * k * n *
                                         2 * (cube.precision / 8));
    bytes.append(kCubeMagic, 4);
    put_le<std::uint16_t>(bytes, cube.version);
    put_le<std::uint16_t>(bytes, n);
    put_le<std::uint32_t>(bytes, k);
    put_le<std::uint32_t>(bytes, nblocks);
    bytes.push_back(static_cast<char>(cube.precision));

    for (const auto& block : cube.blocks) {
        for (int c = 0; c < block.cols(); ++c) {      // bin by bin
            for (int r = 0; r < block.rows(); ++r) {  // channels within a bin
                const Complex z = block(r, c);
                if (cube.precision == 32) {
                    put_le<std::uint32_t>(bytes,
                                          f32_bits(static_cast<float>(z.real())));
                    put_le<std::uint32_t>(bytes,
                                          f32_bits(static_cast<float>(z.imag())));
                } else {
                    put_le<std::uint64_t>(bytes, f64_bits(z.real()));
                    put_le<std::uint64_t>(bytes, f64_bits(z.imag()));
                }
            }
        }
    }

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot open cube file for writing: " + path);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw DataError("short write to cube file: " + path);
}

DataCube read_cube(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open cube file: " + path);
    std::string bytes((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    if (bytes.size() < kCubeHeaderBytes) {
        throw DataError("cube file truncated before header");
    }
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    if (std::memcmp(p, kCubeMagic, 4) != 0) {
        throw DataError("not a data cube: bad magic");
    }
    DataCube cube;
    cube.version = get_le<std::uint16_t>(p + 4);
    const std::uint16_t n = get_le<std::uint16_t>(p + 6);
    const std::uint32_t k = get_le<std::uint32_t>(p + 8);
    const std::uint32_t nblocks = get_le<std::uint32_t>(p + 12);
    cube.precision = p[16];
    if (cube.precision != 32 && cube.precision != 64) {
        throw DataError("cube precision must be 32 or 64");
    }
    if (n < 1 || k < 1 || nblocks < 1) throw DataError("empty cube");

    const std::size_t sample_bytes = 2ull * (cube.precision / 8);
    const std::size_t expected =
        kCubeHeaderBytes +
        static_cast<std::size_t>(nblocks) * k * n * sample_bytes;
    if (bytes.size() != expected) {
        throw DataError("cube payload length does not match header");
    }

    const unsigned char* cursor = p + kCubeHeaderBytes;
    cube.blocks.reserve(nblocks);
    for (std::uint32_t b = 0; b < nblocks; ++b) {
        Eigen::MatrixXcd block(n, k);
        for (std::uint32_t c = 0; c < k; ++c) {
            for (std::uint32_t r = 0; r < n; ++r) {
                double re, im;
                if (cube.precision == 32) {
                    re = bits_f32(get_le<std::uint32_t>(cursor));
                    im = bits_f32(get_le<std::uint32_t>(cursor + 4));
                } else {
                    re = bits_f64(get_le<std::uint64_t>(cursor));
                    im = bits_f64(get_le<std::uint64_t>(cursor + 8));
                }
                block(r, c) = Complex{re, im};
                cursor += sample_bytes;
            }
        }
        cube.blocks.push_back(std::move(block));
    }
    return cube;
}

}  // namespace ced
