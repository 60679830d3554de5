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
#include <functional>
#include <span>
#include <vector>

#include "hashcube/hashcore/hashing_head.hpp"

namespace hashcube {

struct Triplet {
    FeatureVector anchor;
    FeatureVector positive;
    FeatureVector negative;
};

/// max(0, |a - p|^2 - |a - n|^2 + margin).
double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative, double margin);

/// Mean over bits of the squared per-bit batch mean.
double bit_balance_loss(std::span<const SoftCode> batch);

/// Mean over bits of (|s_j| - 1)^2.
double quantization_loss(std::span<const double> soft);

/// Triplets as indices into a shared point list; each point is forwarded
/// once per evaluation.
struct TrainingSet {
    struct Indices {
        std::size_t anchor;
        std::size_t positive;
        std::size_t negative;
    };

    std::vector<FeatureVector> points;
    std::vector<Indices> triplets;

    static TrainingSet from_triplets(std::span<const Triplet> triplets);

    /// Throws InvalidInput on empty triplet list, bad indices, or mixed dims.
    void validate(std::size_t input_dim) const;
};

/// Weighted sum of the mean triplet loss, the bit-balance loss over every
/// forward output, and the mean quantization loss over every forward output.
/// Each triplet contributes three outputs, so shared points are counted once
/// per reference.
double total_loss(const HashingHead& head, const TrainingSet& set);
double total_loss(const HashingHead& head, std::span<const Triplet> triplets);

struct LossGradient {
    double loss = 0.0;
    std::vector<double> weights;  // same layout as HashingHead::weights()
    std::vector<double> bias;
};

/// Analytic gradient of total_loss with respect to W and b.
LossGradient loss_gradient(const HashingHead& head, const TrainingSet& set);

/// Sets each bias to minus the median pre-activation of its bit over
/// `points`, so every bit starts active on half of them.
void balance_bias(HashingHead& head, std::span<const FeatureVector> points);

struct TrainOptions {
    std::size_t steps = 1;
    double learning_rate = 0.1;
};

/// Called after each step with the 1-based step index and the loss that the
/// step's gradient was computed at.
using TrainObserver = std::function<void(std::size_t step, double loss)>;

/// Full-batch gradient descent with a fixed step size. Throws
/// TrainingDiverged naming the first step whose loss is non-finite.
HashingHead train(const HashingHead& head, const TrainingSet& set, const TrainOptions& options,
                  const TrainObserver& observer = {});

HashingHead train(const HashingHead& head, std::span<const Triplet> triplets,
                  std::size_t steps, double learning_rate);

} // namespace hashcube
