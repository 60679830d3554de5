// Copyright 2026-present the hashcube authors
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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hashcube/hashcore/hash_code.hpp"

namespace hashcube {

/// Network input, dimension D.
using FeatureVector = std::vector<double>;

/// Pre-binarization head output, length B, entries in (-1, +1).
using SoftCode = std::vector<double>;

struct LossWeights {
    double triplet = 1.0;
    double bit_balance = 0.5;
    double quantization = 0.5;

    friend bool operator==(const LossWeights&, const LossWeights&) = default;
};

/// Single tanh layer mapping D features to B soft code bits:
/// s = tanh(W x + b), W stored row-major (B rows of D).
class HashingHead {
public:
    static constexpr std::size_t kDefaultInputDim = 128;

    /// Zero weights, default loss weights, margin 2 * B / 16.
    HashingHead(std::size_t input_dim, std::size_t code_bits);

    /// Weights drawn from N(0, scale^2 / D), zero bias.
    static HashingHead random(std::size_t input_dim, std::size_t code_bits,
                              std::uint64_t seed, double scale = 1.0);

    static double default_margin(std::size_t code_bits) {
        return 2.0 * static_cast<double>(code_bits) / 16.0;
    }

    std::size_t input_dim() const { return input_dim_; }
    std::size_t code_bits() const { return code_bits_; }

    std::span<const double> weights() const { return weights_; }
    std::span<double> weights() { return weights_; }
    std::span<const double> bias() const { return bias_; }
    std::span<double> bias() { return bias_; }

    double weight(std::size_t row, std::size_t col) const {
        return weights_[row * input_dim_ + col];
    }
    double& weight(std::size_t row, std::size_t col) {
        return weights_[row * input_dim_ + col];
    }

    const LossWeights& loss_weights() const { return loss_weights_; }
    void set_loss_weights(const LossWeights& w);

    double margin() const { return margin_; }
    void set_margin(double m);

    /// Throws InvalidInput when any parameter is non-finite or out of range.
    void validate() const;

    friend bool operator==(const HashingHead&, const HashingHead&) = default;

private:
    std::size_t input_dim_;
    std::size_t code_bits_;
    std::vector<double> weights_;
    std::vector<double> bias_;
    LossWeights loss_weights_;
    double margin_;
};

SoftCode forward(const HashingHead& head, std::span<const double> x);

/// bit j = 1 iff s_j >= 0 (zero maps to 1).
HashCode sign_binarize(std::span<const double> soft);

HashCode infer_code(const HashingHead& head, std::span<const double> x);

/// Flat little-endian file: "HQHD", u16 version, u32 D, u32 B, W, b,
/// then triplet/bit-balance/quantization weights and margin, all float64.
void save_head(const HashingHead& head, const std::filesystem::path& path);
HashingHead load_head(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_head(const HashingHead& head);
HashingHead deserialize_head(std::span<const std::uint8_t> bytes);

} // namespace hashcube
