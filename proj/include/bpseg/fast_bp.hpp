// Copyright 2026 the bpseg authors
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

// Additive message passing: a fixed number of synchronous updates
//
//   m_t(i, x) = node(i, x) + sum_j w(i, j) * m_{t-1}(j, x),    m_0 = 1/k
//
// followed by score(i, x) = node(i, x) + m_T(i, x) and a per-row argmax.
// Values are not normalized between iterations.

#ifndef BPSEG_FAST_BP_HPP
#define BPSEG_FAST_BP_HPP

#include <cmath>
#include <cstddef>
#include <sstream>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bpseg/bp.hpp"
#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/factor_graph.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/parallel.hpp"

namespace bpseg {

/// n x k running preferences m(i, x).
struct FastMessageTable {
    Matrix<double> values;

    std::size_t size() const noexcept { return values.rows(); }
    std::size_t labels() const noexcept { return values.cols(); }
    double operator()(std::size_t i, std::size_t x) const noexcept { return values(i, x); }
};

struct FastBpResult {
    Segmentation segmentation;
    FastMessageTable messages;
    Matrix<double> scores;  // node + final messages; argmax gives the labels
    Representatives representatives;
};

/// Upper bound on |m_t(i, x)| for t <= iterations: the guard used by the
/// overflow checks in tests and benchmarks.
inline double fast_message_bound(std::size_t n, std::size_t k, double lambda, std::size_t iterations) {
    return std::pow(1.0 + static_cast<double>(n) * std::abs(lambda), static_cast<double>(iterations)) *
           (1.0 + 1.0 / static_cast<double>(k));
}

/// The recurrence on precomputed factors. `weights` is n x n and used as-is,
/// diagonal included.
inline FastBpResult run_fast_bp(const NodeFactorTable& node, const Matrix<double>& weights, std::size_t iterations,
                                unsigned threads = 1) {
    const std::size_t n = node.size();
    const std::size_t k = node.labels();
    if (weights.rows() != n || weights.cols() != n) {
        throw ShapeError("weight matrix must be n x n");
    }
    if (iterations == 0) {
        throw ConfigError("fast BP needs at least one iteration");
    }

    Matrix<double> prev(n, k, 1.0 / static_cast<double>(k));
    Matrix<double> next(n, k);
    for (std::size_t t = 1; t <= iterations; ++t) {
        parallel_for(n, threads, [&](std::size_t i) {
            auto out = next.row(i);
            for (std::size_t x = 0; x < k; ++x) {
                out[x] = node(i, x);
            }
            const auto w = weights.row(i);
            for (std::size_t j = 0; j < n; ++j) {
                if (w[j] == 0.0) {
                    continue;
                }
                const auto m = prev.row(j);
                for (std::size_t x = 0; x < k; ++x) {
                    out[x] += w[j] * m[x];
                }
            }
            for (std::size_t x = 0; x < k; ++x) {
                if (!std::isfinite(out[x])) {
                    std::ostringstream os;
                    os << "fast BP: non-finite message at iteration " << t << " (i=" << i << ", x=" << x
                       << "); use a smaller lambda or fewer iterations";
                    throw NumericalError(os.str());
                }
            }
        });
        std::swap(prev, next);
    }

    Matrix<double> scores(n, k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t x = 0; x < k; ++x) {
            scores(i, x) = node(i, x) + prev(i, x);
        }
    }
    Segmentation seg = assign(scores);
    return {std::move(seg), {std::move(prev)}, std::move(scores), {}};
}

inline FastBpResult run_fast_bp(const SimilarityMatrix& sim, const Representatives& reps, const FactorConfig& cfg,
                                std::size_t iterations) {
    if (cfg.variant != Variant::fast) {
        throw ConfigError("run_fast_bp requires the fast variant");
    }
    FactorConfig checked = cfg;
    checked.k = reps.size();
    checked.validate(sim.size());
    const NodeFactorTable node = node_factors_fast(sim, reps);
    const Matrix<double> w = edge_weights_fast(sim, cfg.lambda, cfg.sigma, cfg.fast_self_term);
    FastBpResult result = run_fast_bp(node, w, iterations, cfg.threads);
    result.representatives = reps;
    return result;
}

inline FastBpResult run_fast_bp(const EmbeddingMatrix& embeddings, const FactorConfig& cfg, std::size_t iterations) {
    cfg.validate(embeddings.size());
    const SimilarityMatrix sim = similarity_matrix(embeddings, cfg.threads);
    return run_fast_bp(sim, init_representatives(embeddings, cfg.k, cfg.seed), cfg, iterations);
}

/// Renumbers the labels in use as 0, 1, ... in order of first occurrence.
inline Segmentation compact_labels(const Segmentation& seg) {
    Segmentation out;
    out.labels.reserve(seg.labels.size());
    std::unordered_map<Label, Label> dense;
    for (Label label : seg.labels) {
        auto [it, inserted] = dense.try_emplace(label, static_cast<Label>(out.original_labels.size()));
        if (inserted) {
            const bool chained = !seg.original_labels.empty() && label >= 0 &&
                                 static_cast<std::size_t>(label) < seg.original_labels.size();
            out.original_labels.push_back(chained ? seg.original_labels[static_cast<std::size_t>(label)] : label);
        }
        out.labels.push_back(it->second);
    }
    out.k = out.original_labels.size();
    return out;
}

}  // namespace bpseg

#endif  // BPSEG_FAST_BP_HPP
