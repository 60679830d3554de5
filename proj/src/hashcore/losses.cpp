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

#include "hashcube/hashcore/losses.hpp"

#include <algorithm>
#include <cmath>

#include "hashcube/error.hpp"

namespace hashcube {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return acc;
}

struct Evaluation {
    std::vector<SoftCode> outputs;     // per point; empty when unreferenced
    std::vector<double> multiplicity;  // references per point
};

Evaluation evaluate(const HashingHead& head, const TrainingSet& set) {
    set.validate(head.input_dim());
    Evaluation ev;
    ev.outputs.resize(set.points.size());
    ev.multiplicity.assign(set.points.size(), 0.0);
    for (const auto& t : set.triplets) {
        ev.multiplicity[t.anchor] += 1.0;
        ev.multiplicity[t.positive] += 1.0;
        ev.multiplicity[t.negative] += 1.0;
    }
    for (std::size_t u = 0; u < set.points.size(); ++u) {
        if (ev.multiplicity[u] > 0.0) {
            ev.outputs[u] = forward(head, set.points[u]);
        }
    }
    return ev;
}

} // namespace

double triplet_loss(std::span<const double> anchor, std::span<const double> positive,
                    std::span<const double> negative, double margin) {
    if (anchor.size() != positive.size() || anchor.size() != negative.size()) {
        throw InvalidInput("triplet members must have equal length");
    }
    if (!(margin > 0.0)) {
        throw InvalidInput("triplet margin must be positive");
    }
    const double v = squared_distance(anchor, positive) -
                     squared_distance(anchor, negative) + margin;
    return v > 0.0 ? v : 0.0;
}

double bit_balance_loss(std::span<const SoftCode> batch) {
    if (batch.empty()) {
        throw InvalidInput("bit balance loss needs a non-empty batch");
    }
    const std::size_t bits = batch.front().size();
    if (bits == 0) {
        throw InvalidInput("soft codes must be non-empty");
    }
    std::vector<double> mean(bits, 0.0);
    for (const auto& s : batch) {
        if (s.size() != bits) {
            throw InvalidInput("soft codes in a batch must have equal length");
        }
        for (std::size_t j = 0; j < bits; ++j) mean[j] += s[j];
    }
    double acc = 0.0;
    const double n = static_cast<double>(batch.size());
    for (double m : mean) {
        acc += (m / n) * (m / n);
    }
    return acc / static_cast<double>(bits);
}

double quantization_loss(std::span<const double> soft) {
    if (soft.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (double s : soft) {
        const double d = std::abs(s) - 1.0;
        acc += d * d;
    }
    return acc / static_cast<double>(soft.size());
}

TrainingSet TrainingSet::from_triplets(std::span<const Triplet> triplets) {
    TrainingSet set;
    set.points.reserve(triplets.size() * 3);
    set.triplets.reserve(triplets.size());
    for (const auto& t : triplets) {
        const std::size_t base = set.points.size();
        set.points.push_back(t.anchor);
        set.points.push_back(t.positive);
        set.points.push_back(t.negative);
        set.triplets.push_back({base, base + 1, base + 2});
    }
    return set;
}

void TrainingSet::validate(std::size_t input_dim) const {
    if (triplets.empty()) {
        throw InvalidInput("training set needs at least one triplet");
    }
    for (const auto& p : points) {
        if (p.size() != input_dim) {
            throw DimensionMismatch(input_dim, p.size());
        }
    }
    for (const auto& t : triplets) {
        if (t.anchor >= points.size() || t.positive >= points.size() ||
            t.negative >= points.size()) {
            throw InvalidInput("triplet index out of range");
        }
    }
}

double total_loss(const HashingHead& head, const TrainingSet& set) {
    return loss_gradient(head, set).loss;
}

double total_loss(const HashingHead& head, std::span<const Triplet> triplets) {
    return total_loss(head, TrainingSet::from_triplets(triplets));
}

LossGradient loss_gradient(const HashingHead& head, const TrainingSet& set) {
    const Evaluation ev = evaluate(head, set);
    const std::size_t bits = head.code_bits();
    const std::size_t dim = head.input_dim();
    const double b = static_cast<double>(bits);
    const double t_count = static_cast<double>(set.triplets.size());
    const double n_outputs = 3.0 * t_count;
    const LossWeights& lw = head.loss_weights();

    std::vector<std::vector<double>> grad_soft(set.points.size());
    for (std::size_t u = 0; u < set.points.size(); ++u) {
        if (!ev.outputs[u].empty()) grad_soft[u].assign(bits, 0.0);
    }

    double tri = 0.0;
    for (const auto& t : set.triplets) {
        const auto& a = ev.outputs[t.anchor];
        const auto& p = ev.outputs[t.positive];
        const auto& n = ev.outputs[t.negative];
        const double v = squared_distance(a, p) - squared_distance(a, n) + head.margin();
        if (v <= 0.0) continue;
        tri += v;
        const double scale = lw.triplet / t_count;
        for (std::size_t j = 0; j < bits; ++j) {
            grad_soft[t.anchor][j] += scale * 2.0 * (n[j] - p[j]);
            grad_soft[t.positive][j] -= scale * 2.0 * (a[j] - p[j]);
            grad_soft[t.negative][j] += scale * 2.0 * (a[j] - n[j]);
        }
    }
    tri /= t_count;

    std::vector<double> mean(bits, 0.0);
    double quant = 0.0;
    for (std::size_t u = 0; u < set.points.size(); ++u) {
        const auto& s = ev.outputs[u];
        if (s.empty()) continue;
        const double c = ev.multiplicity[u];
        for (std::size_t j = 0; j < bits; ++j) {
            mean[j] += c * s[j];
            const double d = std::abs(s[j]) - 1.0;
            quant += c * d * d;
        }
    }
    double balance = 0.0;
    for (double& m : mean) {
        m /= n_outputs;
        balance += m * m;
    }
    balance /= b;
    quant /= n_outputs * b;

    for (std::size_t u = 0; u < set.points.size(); ++u) {
        const auto& s = ev.outputs[u];
        if (s.empty()) continue;
        const double c = ev.multiplicity[u];
        for (std::size_t j = 0; j < bits; ++j) {
            const double sign = s[j] > 0.0 ? 1.0 : (s[j] < 0.0 ? -1.0 : 0.0);
            grad_soft[u][j] += lw.bit_balance * 2.0 * mean[j] * c / (n_outputs * b);
            grad_soft[u][j] +=
                    lw.quantization * c * 2.0 * (std::abs(s[j]) - 1.0) * sign / (n_outputs * b);
        }
    }

    LossGradient out;
    out.loss = lw.triplet * tri + lw.bit_balance * balance + lw.quantization * quant;
    out.weights.assign(bits * dim, 0.0);
    out.bias.assign(bits, 0.0);
    for (std::size_t u = 0; u < set.points.size(); ++u) {
        const auto& s = ev.outputs[u];
        if (s.empty()) continue;
        const auto& x = set.points[u];
        for (std::size_t j = 0; j < bits; ++j) {
            const double dz = grad_soft[u][j] * (1.0 - s[j] * s[j]);
            if (dz == 0.0) continue;
            out.bias[j] += dz;
            double* row = out.weights.data() + j * dim;
            for (std::size_t k = 0; k < dim; ++k) {
                row[k] += dz * x[k];
            }
        }
    }
    return out;
}

void balance_bias(HashingHead& head, std::span<const FeatureVector> points) {
    if (points.empty()) {
        throw InvalidInput("bias balancing needs at least one point");
    }
    const std::size_t dim = head.input_dim();
    std::vector<double> pre(points.size());
    for (std::size_t j = 0; j < head.code_bits(); ++j) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i].size() != dim) {
                throw DimensionMismatch(dim, points[i].size());
            }
            double z = 0.0;
            for (std::size_t k = 0; k < dim; ++k) z += head.weight(j, k) * points[i][k];
            pre[i] = z;
        }
        auto mid = pre.begin() + static_cast<std::ptrdiff_t>(pre.size() / 2);
        std::nth_element(pre.begin(), mid, pre.end());
        head.bias()[j] = -*mid;
    }
}

HashingHead train(const HashingHead& head, const TrainingSet& set, const TrainOptions& options,
                  const TrainObserver& observer) {
    if (options.steps < 1) {
        throw InvalidInput("training needs at least one step");
    }
    if (!(options.learning_rate >= 0.0) || !std::isfinite(options.learning_rate)) {
        throw InvalidInput("learning rate must be finite and non-negative");
    }
    head.validate();
    set.validate(head.input_dim());

    HashingHead current = head;
    for (std::size_t step = 1; step <= options.steps; ++step) {
        const LossGradient g = loss_gradient(current, set);
        if (!std::isfinite(g.loss)) {
            throw TrainingDiverged(step);
        }
        if (observer) observer(step, g.loss);
        if (options.learning_rate == 0.0) continue;
        auto w = current.weights();
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] -= options.learning_rate * g.weights[i];
        }
        auto bias = current.bias();
        for (std::size_t i = 0; i < bias.size(); ++i) {
            bias[i] -= options.learning_rate * g.bias[i];
        }
    }
    for (double w : current.weights()) {
        if (!std::isfinite(w)) throw TrainingDiverged(options.steps);
    }
    for (double x : current.bias()) {
        if (!std::isfinite(x)) throw TrainingDiverged(options.steps);
    }
    return current;
}

HashingHead train(const HashingHead& head, std::span<const Triplet> triplets,
                  std::size_t steps, double learning_rate) {
    return train(head, TrainingSet::from_triplets(triplets), {steps, learning_rate});
}

} // namespace hashcube
