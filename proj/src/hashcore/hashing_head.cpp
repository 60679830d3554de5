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

#include "hashcube/hashcore/hashing_head.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hashcube/detail/file_io.hpp"
#include "hashcube/detail/le_io.hpp"
#include "hashcube/error.hpp"

namespace hashcube {

namespace {

constexpr char kHeadMagic[4] = {'H', 'Q', 'H', 'D'};
constexpr std::uint16_t kHeadVersion = 1;

bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

} // namespace

HashingHead::HashingHead(std::size_t input_dim, std::size_t code_bits)
        : input_dim_(input_dim),
          code_bits_(code_bits),
          weights_(input_dim * code_bits, 0.0),
          bias_(code_bits, 0.0),
          margin_(default_margin(code_bits)) {
    if (input_dim == 0) {
        throw InvalidInput("hashing head input dimension must be positive");
    }
    if (code_bits == 0 || code_bits > HashCode::kMaxBits) {
        throw InvalidInput("hashing head code width must be in [1, 128]");
    }
}

HashingHead HashingHead::random(std::size_t input_dim, std::size_t code_bits,
                                std::uint64_t seed, double scale) {
    HashingHead head(input_dim, code_bits);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, scale / std::sqrt(static_cast<double>(input_dim)));
    for (double& w : head.weights_) {
        w = gauss(rng);
    }
    return head;
}

void HashingHead::set_loss_weights(const LossWeights& w) {
    if (!(w.triplet >= 0.0) || !(w.bit_balance >= 0.0) || !(w.quantization >= 0.0) ||
        !std::isfinite(w.triplet) || !std::isfinite(w.bit_balance) ||
        !std::isfinite(w.quantization)) {
        throw InvalidInput("loss weights must be finite and non-negative");
    }
    loss_weights_ = w;
}

void HashingHead::set_margin(double m) {
    if (!(m > 0.0) || !std::isfinite(m)) {
        throw InvalidInput("triplet margin must be finite and positive");
    }
    margin_ = m;
}

void HashingHead::validate() const {
    if (!all_finite(weights_) || !all_finite(bias_)) {
        throw InvalidInput("hashing head parameters must be finite");
    }
    if (!(margin_ > 0.0) || !std::isfinite(margin_)) {
        throw InvalidInput("triplet margin must be finite and positive");
    }
    const auto& w = loss_weights_;
    if (!(w.triplet >= 0.0) || !(w.bit_balance >= 0.0) || !(w.quantization >= 0.0) ||
        !std::isfinite(w.triplet + w.bit_balance + w.quantization)) {
        throw InvalidInput("loss weights must be finite and non-negative");
    }
}

SoftCode forward(const HashingHead& head, std::span<const double> x) {
    const std::size_t d = head.input_dim();
    if (x.size() != d) {
        throw DimensionMismatch(d, x.size());
    }
    const auto w = head.weights();
    const auto b = head.bias();
    SoftCode out(head.code_bits());
    for (std::size_t row = 0; row < out.size(); ++row) {
        const double* wr = w.data() + row * d;
        double z = b[row];
        for (std::size_t col = 0; col < d; ++col) {
            z += wr[col] * x[col];
        }
        out[row] = std::tanh(z);
    }
    return out;
}

HashCode sign_binarize(std::span<const double> soft) {
    HashCode code(soft.size());
    for (std::size_t j = 0; j < soft.size(); ++j) {
        if (soft[j] >= 0.0) {
            code.set(j);
        }
    }
    return code;
}

HashCode infer_code(const HashingHead& head, std::span<const double> x) {
    return sign_binarize(forward(head, x));
}

std::vector<std::uint8_t> serialize_head(const HashingHead& head) {
    detail::ByteWriter out;
    out.raw(std::string_view(kHeadMagic, 4));
    out.put<std::uint16_t>(kHeadVersion);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(head.input_dim()));
    out.put<std::uint32_t>(static_cast<std::uint32_t>(head.code_bits()));
    for (double w : head.weights()) out.put<double>(w);
    for (double b : head.bias()) out.put<double>(b);
    out.put<double>(head.loss_weights().triplet);
    out.put<double>(head.loss_weights().bit_balance);
    out.put<double>(head.loss_weights().quantization);
    out.put<double>(head.margin());
    return std::move(out.bytes());
}

HashingHead deserialize_head(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes, "head");
    auto magic = in.raw(4);
    if (!std::equal(magic.begin(), magic.end(), kHeadMagic)) {
        throw ParseError("head@0", "bad magic, expected HQHD");
    }
    const auto version = in.get<std::uint16_t>();
    if (version != kHeadVersion) {
        throw ParseError("head@4", "unsupported head version " + std::to_string(version));
    }
    const auto d = in.get<std::uint32_t>();
    const auto b = in.get<std::uint32_t>();
    HashingHead head(d, b);
    for (double& w : head.weights()) w = in.get<double>();
    for (double& x : head.bias()) x = in.get<double>();
    LossWeights lw;
    lw.triplet = in.get<double>();
    lw.bit_balance = in.get<double>();
    lw.quantization = in.get<double>();
    head.set_loss_weights(lw);
    head.set_margin(in.get<double>());
    if (!in.done()) {
        throw ParseError("head@" + std::to_string(in.offset()), "trailing bytes");
    }
    head.validate();
    return head;
}

void save_head(const HashingHead& head, const std::filesystem::path& path) {
    detail::write_file_bytes(path, serialize_head(head));
}

HashingHead load_head(const std::filesystem::path& path) {
    return deserialize_head(detail::read_file_bytes(path));
}

} // namespace hashcube
