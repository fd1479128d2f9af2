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

// Segment representatives and the unary / pairwise factors of the fully
// connected sentence graph.
//
// Two parameterizations are supported:
//
//   full (sum-product):  node(i, x)   = exp(sim(i, rep[x]))
//                        edge(i, j)   = 1 if labels agree,
//                                       exp(lambda * (sim(i, j) - 1)) otherwise
//   fast (additive):     node(i, x)   = sim(i, rep[x])
//                        weight(i, j) = lambda * sim(i, j) * exp(-(i - j)^2 / sigma)

#ifndef BPSEG_FACTOR_GRAPH_HPP
#define BPSEG_FACTOR_GRAPH_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/rng.hpp"

namespace bpseg {

enum class Variant { full, fast };

inline const char* to_string(Variant v) noexcept { return v == Variant::full ? "full" : "fast"; }

struct FactorConfig {
    static constexpr double kDefaultFullLambda = 0.12;
    static constexpr double kDefaultFastLambda = 300.0;
    static constexpr double kDefaultSigma = 10.0;

    std::size_t k = 2;
    double lambda = kDefaultFullLambda;
    double sigma = kDefaultSigma;
    Variant variant = Variant::full;
    std::uint64_t seed = 0;
    // Literal readings of the update rules, off by default.
    bool include_self_messages = false;
    bool fast_self_term = false;
    unsigned threads = 1;

    static FactorConfig full(std::size_t k, std::uint64_t seed = 0) {
        FactorConfig c;
        c.k = k;
        c.seed = seed;
        return c;
    }

    static FactorConfig fast(std::size_t k, std::uint64_t seed = 0) {
        FactorConfig c;
        c.k = k;
        c.lambda = kDefaultFastLambda;
        c.variant = Variant::fast;
        c.seed = seed;
        return c;
    }

    /// Throws ConfigError unless the configuration is usable on n sentences.
    void validate(std::size_t n) const {
        if (k == 0) {
            throw ConfigError("k must be >= 1");
        }
        if (k > n) {
            throw ConfigError("k = " + std::to_string(k) + " exceeds the number of sentences (" + std::to_string(n) + ")");
        }
        if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
            throw ConfigError("lambda must be finite and >= 0");
        }
        if (variant == Variant::fast && (!(sigma > 0.0) || !std::isfinite(sigma))) {
            throw ConfigError("sigma must be positive and finite");
        }
    }
};

/// Indices of the sentences anchoring each label: label x is represented by
/// sentence `indices[x]`.
struct Representatives {
    std::vector<std::size_t> indices;

    std::size_t size() const noexcept { return indices.size(); }
    std::size_t operator[](std::size_t label) const noexcept { return indices[label]; }

    void validate(std::size_t n) const {
        std::vector<bool> seen(n, false);
        for (std::size_t idx : indices) {
            if (idx >= n) {
                throw ConfigError("representative index out of range");
            }
            if (seen[idx]) {
                throw ConfigError("representative indices must be distinct");
            }
            seen[idx] = true;
        }
        if (indices.empty()) {
            throw ConfigError("at least one representative is required");
        }
    }
};

/// k distinct sentence indices drawn uniformly without replacement (partial
/// Fisher-Yates on xoshiro256**). Deterministic per (n, k, seed).
inline Representatives init_representatives(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k == 0) {
        throw ConfigError("k must be >= 1");
    }
    if (k > n) {
        throw ConfigError("k = " + std::to_string(k) + " exceeds the number of sentences (" + std::to_string(n) + ")");
    }
    std::vector<std::size_t> pool(n);
    std::iota(pool.begin(), pool.end(), std::size_t{0});
    Xoshiro256 rng(seed);
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return {std::move(pool)};
}

inline Representatives init_representatives(const EmbeddingMatrix& embeddings, std::size_t k, std::uint64_t seed) {
    return init_representatives(embeddings.size(), k, seed);
}

/// n x k table of unary factors.
struct NodeFactorTable {
    Matrix<double> values;
    Variant variant = Variant::full;

    std::size_t size() const noexcept { return values.rows(); }
    std::size_t labels() const noexcept { return values.cols(); }
    double operator()(std::size_t i, std::size_t x) const noexcept { return values(i, x); }
};

namespace detail {

inline void check_reps(const SimilarityMatrix& sim, const Representatives& reps) {
    reps.validate(sim.size());
}

}  // namespace detail

inline NodeFactorTable node_factors_full(const SimilarityMatrix& sim, const Representatives& reps) {
    detail::check_reps(sim, reps);
    Matrix<double> t(sim.size(), reps.size());
    for (std::size_t i = 0; i < sim.size(); ++i) {
        for (std::size_t x = 0; x < reps.size(); ++x) {
            t(i, x) = std::exp(sim(i, reps[x]));
        }
    }
    return {std::move(t), Variant::full};
}

/// Node factors against anchor vectors that need not be sentences of the
/// document: entry (i, x) = exp(cosine(sentence i, anchor x)).
inline NodeFactorTable node_factors_full(const EmbeddingMatrix& sentences, const EmbeddingMatrix& anchors) {
    Matrix<double> t(sentences.size(), anchors.size());
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        for (std::size_t x = 0; x < anchors.size(); ++x) {
            t(i, x) = std::exp(cosine(sentences.row(i), anchors.row(x)));
        }
    }
    return {std::move(t), Variant::full};
}

/// Pairwise factor of the full model; at most 1, and exactly 1 when the
/// labels agree.
inline double edge_factor_full(double similarity, std::size_t xi, std::size_t xj, double lambda) noexcept {
    return xi == xj ? 1.0 : std::exp(lambda * (similarity - 1.0));
}

inline double edge_factor_full(const SimilarityMatrix& sim, std::size_t i, std::size_t j, std::size_t xi,
                               std::size_t xj, double lambda) {
    if (i == j) {
        throw ConfigError("edge factor requested for a self-edge (i == j)");
    }
    return edge_factor_full(sim(i, j), xi, xj, lambda);
}

inline NodeFactorTable node_factors_fast(const SimilarityMatrix& sim, const Representatives& reps) {
    detail::check_reps(sim, reps);
    Matrix<double> t(sim.size(), reps.size());
    for (std::size_t i = 0; i < sim.size(); ++i) {
        for (std::size_t x = 0; x < reps.size(); ++x) {
            t(i, x) = sim(i, reps[x]);
        }
    }
    return {std::move(t), Variant::fast};
}

/// Weight of a single pair in the fast variant. Self pairs use distance 0.
inline double edge_weight_fast(double similarity, std::size_t i, std::size_t j, double lambda, double sigma) noexcept {
    const double gap = static_cast<double>(i > j ? i - j : j - i);
    return lambda * similarity * std::exp(-(gap * gap) / sigma);
}

/// Symmetric n x n weights of the fast variant. The diagonal is 0 unless
/// `self_term` is set, in which case it holds lambda * sim(i, i) = lambda.
inline Matrix<double> edge_weights_fast(const SimilarityMatrix& sim, double lambda, double sigma, bool self_term = false) {
    const std::size_t n = sim.size();
    Matrix<double> w(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (self_term) {
            w(i, i) = edge_weight_fast(sim(i, i), i, i, lambda, sigma);
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            w(i, j) = edge_weight_fast(sim(i, j), i, j, lambda, sigma);
            w(j, i) = w(i, j);
        }
    }
    return w;
}

}  // namespace bpseg

#endif  // BPSEG_FACTOR_GRAPH_HPP
