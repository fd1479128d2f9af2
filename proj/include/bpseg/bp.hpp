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

// Sum-product belief propagation on the fully connected sentence graph.
//
// A message m(i -> j) is a distribution over the k labels of node j:
//
//   m(i -> j)(xj) ∝ sum_xi node(i, xi) * edge(i, j, xi, xj) * prod_{l != i, j} m(l -> i)(xi)
//
// Messages are updated synchronously (all of sweep t reads sweep t-1),
// normalized to sum 1, and the incoming products are accumulated as sums of
// logs. Beliefs are node(i, x) * prod_{j != i} m(j -> i)(x), row-normalized.

#ifndef BPSEG_BP_HPP
#define BPSEG_BP_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/factor_graph.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/parallel.hpp"

namespace bpseg {

using Label = int;

/// Per-sentence labels. `original_labels`, when non-empty, maps each dense
/// label back to the label it had before compaction.
struct Segmentation {
    std::vector<Label> labels;
    std::size_t k = 0;
    std::vector<Label> original_labels;

    std::size_t size() const noexcept { return labels.size(); }
};

/// n x k table of normalized beliefs; row i is the label distribution of
/// sentence i.
struct Beliefs {
    Matrix<double> values;

    std::size_t size() const noexcept { return values.rows(); }
    std::size_t labels() const noexcept { return values.cols(); }
    std::span<const double> row(std::size_t i) const noexcept { return values.row(i); }
    double operator()(std::size_t i, std::size_t x) const noexcept { return values(i, x); }
};

/// n x n x k message store; slot (i, j) holds m(i -> j). The diagonal is only
/// populated when self-messages are enabled.
class MessageTensor {
public:
    MessageTensor() = default;
    MessageTensor(std::size_t n, std::size_t k, double fill) : n_(n), k_(k), data_(n * n * k, fill) {}

    std::size_t size() const noexcept { return n_; }
    std::size_t labels() const noexcept { return k_; }

    std::span<double> message(std::size_t from, std::size_t to) noexcept { return {data_.data() + (from * n_ + to) * k_, k_}; }
    std::span<const double> message(std::size_t from, std::size_t to) const noexcept {
        return {data_.data() + (from * n_ + to) * k_, k_};
    }
    double operator()(std::size_t from, std::size_t to, std::size_t x) const noexcept {
        return data_[(from * n_ + to) * k_ + x];
    }

    friend bool operator==(const MessageTensor&, const MessageTensor&) = default;

private:
    std::size_t n_ = 0;
    std::size_t k_ = 0;
    std::vector<double> data_;
};

struct BpRunReport {
    std::size_t iterations_run = 0;
    bool converged = false;
    std::vector<double> max_delta_history;
    double wall_time_seconds = 0.0;
};

struct BpOptions {
    static constexpr std::size_t kDefaultMaxIterations = 50;
    static constexpr double kDefaultTolerance = 1e-6;

    std::size_t max_iterations = kDefaultMaxIterations;
    double tolerance = kDefaultTolerance;
};

/// Every message uniform at 1/k.
inline MessageTensor init_messages(std::size_t n, std::size_t k) {
    if (n == 0 || k == 0) {
        throw ConfigError("init_messages: n and k must be >= 1");
    }
    return MessageTensor(n, k, 1.0 / static_cast<double>(k));
}

struct SweepResult {
    MessageTensor messages;
    double max_delta = 0.0;
};

namespace detail {

[[noreturn]] inline void numerical_failure(const char* where, std::size_t i, std::size_t j, std::size_t x) {
    std::ostringstream os;
    os << where << ": non-finite or zero value at (i=" << i << ", j=" << j << ", x=" << x
       << "); try a smaller lambda";
    throw NumericalError(os.str());
}

inline void check_shapes(const MessageTensor& msgs, const NodeFactorTable& node) {
    if (msgs.size() != node.size() || msgs.labels() != node.labels()) {
        throw ShapeError("message tensor and node factor table disagree on n or k");
    }
}

}  // namespace detail

/// One synchronous update of every message from `prev`.
///
/// With `include_self_messages` the product over incoming messages runs over
/// every l != j (so it also contains m(i -> i)), and the self-message
/// m(i -> i) is itself updated by the same rule with edge(i, i) computed from
/// sim(i, i) = 1.
inline SweepResult sweep_messages(const MessageTensor& prev, const NodeFactorTable& node, const SimilarityMatrix& sim,
                                  double lambda, bool include_self_messages = false, unsigned threads = 1) {
    detail::check_shapes(prev, node);
    if (sim.size() != node.size()) {
        throw ShapeError("similarity matrix and node factor table disagree on n");
    }
    const std::size_t n = prev.size();
    const std::size_t k = prev.labels();

    MessageTensor next(n, k, 0.0);
    std::vector<double> row_delta(n, 0.0);

    parallel_for(n, threads, [&](std::size_t i) {
        // log of node(i, x) times every incoming message into i.
        std::vector<double> log_in(k);
        for (std::size_t x = 0; x < k; ++x) {
            log_in[x] = std::log(node(i, x));
        }
        for (std::size_t l = 0; l < n; ++l) {
            if (l == i && !include_self_messages) {
                continue;
            }
            const auto m = prev.message(l, i);
            for (std::size_t x = 0; x < k; ++x) {
                log_in[x] += std::log(m[x]);
            }
        }

        std::vector<double> weight(k);
        double delta = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i && !include_self_messages) {
                continue;
            }
            // Drop the target's own message to i from the product.
            const auto back = prev.message(j, i);
            double top = -std::numeric_limits<double>::infinity();
            for (std::size_t x = 0; x < k; ++x) {
                weight[x] = log_in[x] - std::log(back[x]);
                top = std::max(top, weight[x]);
            }
            if (!std::isfinite(top)) {
                detail::numerical_failure("sweep_messages", i, j, 0);
            }
            double total = 0.0;
            for (std::size_t x = 0; x < k; ++x) {
                weight[x] = std::exp(weight[x] - top);
                total += weight[x];
            }

            // edge(i, j) is 1 on the diagonal and `off` elsewhere, so the sum
            // over xi splits into off * total + (1 - off) * weight[xj].
            const double off = edge_factor_full(sim(i, j), 0, 1, lambda);
            auto out = next.message(i, j);
            double norm = 0.0;
            for (std::size_t x = 0; x < k; ++x) {
                out[x] = off * total + (1.0 - off) * weight[x];
                norm += out[x];
            }
            for (std::size_t x = 0; x < k; ++x) {
                out[x] /= norm;
                if (!std::isfinite(out[x]) || out[x] <= 0.0) {
                    detail::numerical_failure("sweep_messages", i, j, x);
                }
                delta = std::max(delta, std::abs(out[x] - prev(i, j, x)));
            }
        }
        row_delta[i] = delta;
    });

    double max_delta = 0.0;
    for (double d : row_delta) {
        max_delta = std::max(max_delta, d);
    }
    return {std::move(next), max_delta};
}

/// Row-normalized beliefs from the current messages.
inline Beliefs compute_beliefs(const MessageTensor& msgs, const NodeFactorTable& node) {
    detail::check_shapes(msgs, node);
    const std::size_t n = msgs.size();
    const std::size_t k = msgs.labels();
    Matrix<double> b(n, k);
    std::vector<double> logs(k);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t x = 0; x < k; ++x) {
            logs[x] = std::log(node(i, x));
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) {
                continue;
            }
            const auto m = msgs.message(j, i);
            for (std::size_t x = 0; x < k; ++x) {
                logs[x] += std::log(m[x]);
            }
        }
        const double top = *std::max_element(logs.begin(), logs.end());
        if (!std::isfinite(top)) {
            detail::numerical_failure("compute_beliefs", i, i, 0);
        }
        double total = 0.0;
        for (std::size_t x = 0; x < k; ++x) {
            b(i, x) = std::exp(logs[x] - top);
            total += b(i, x);
        }
        if (!(total > 0.0) || !std::isfinite(total)) {
            detail::numerical_failure("compute_beliefs", i, i, 0);
        }
        for (std::size_t x = 0; x < k; ++x) {
            b(i, x) /= total;
        }
    }
    return {std::move(b)};
}

/// Index of the largest entry; the first one wins ties.
inline Label argmax(std::span<const double> row) noexcept {
    std::size_t best = 0;
    for (std::size_t x = 1; x < row.size(); ++x) {
        if (row[x] > row[best]) {
            best = x;
        }
    }
    return static_cast<Label>(best);
}

/// Highest-belief label per sentence.
inline Segmentation assign(const Matrix<double>& scores) {
    Segmentation seg;
    seg.k = scores.cols();
    seg.labels.reserve(scores.rows());
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        seg.labels.push_back(argmax(scores.row(i)));
    }
    return seg;
}

inline Segmentation assign(const Beliefs& beliefs) { return assign(beliefs.values); }

struct BpResult {
    Segmentation segmentation;
    Beliefs beliefs;
    BpRunReport report;
    Representatives representatives;
};

/// Runs sweeps from uniform messages until the largest message change drops
/// below `opts.tolerance` or `opts.max_iterations` sweeps have run. Uses
/// cfg.lambda, cfg.include_self_messages and cfg.threads; the label count
/// comes from `node`.
inline BpResult run_bp(const SimilarityMatrix& sim, const NodeFactorTable& node, const FactorConfig& cfg,
                       const BpOptions& opts = {}) {
    const auto start = std::chrono::steady_clock::now();
    if (cfg.variant != Variant::full || node.variant != Variant::full) {
        throw ConfigError("run_bp requires the full variant");
    }
    if (sim.size() != node.size()) {
        throw ShapeError("similarity matrix and node factor table disagree on n");
    }
    if (!(cfg.lambda >= 0.0) || !std::isfinite(cfg.lambda)) {
        throw ConfigError("lambda must be finite and >= 0");
    }
    MessageTensor msgs = init_messages(node.size(), node.labels());
    BpRunReport report;
    for (std::size_t t = 0; t < opts.max_iterations; ++t) {
        auto [next, delta] = sweep_messages(msgs, node, sim, cfg.lambda, cfg.include_self_messages, cfg.threads);
        msgs = std::move(next);
        report.max_delta_history.push_back(delta);
        ++report.iterations_run;
        if (delta < opts.tolerance) {
            report.converged = true;
            break;
        }
    }
    Beliefs beliefs = compute_beliefs(msgs, node);
    Segmentation seg = assign(beliefs);
    report.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return {std::move(seg), std::move(beliefs), std::move(report), {}};
}

inline BpResult run_bp(const SimilarityMatrix& sim, const Representatives& reps, const FactorConfig& cfg,
                       const BpOptions& opts = {}) {
    if (cfg.variant != Variant::full) {
        throw ConfigError("run_bp requires the full variant");
    }
    FactorConfig checked = cfg;
    checked.k = reps.size();
    checked.validate(sim.size());
    BpResult result = run_bp(sim, node_factors_full(sim, reps), cfg, opts);
    result.representatives = reps;
    return result;
}

inline BpResult run_bp(const EmbeddingMatrix& embeddings, const FactorConfig& cfg, const BpOptions& opts = {}) {
    cfg.validate(embeddings.size());
    const SimilarityMatrix sim = similarity_matrix(embeddings, cfg.threads);
    return run_bp(sim, init_representatives(embeddings, cfg.k, cfg.seed), cfg, opts);
}

/// Exact marginals of p(x) ∝ prod_i node(i, xi) * prod_{i<j} edge(i, j, xi, xj)
/// by enumerating all k^n joint labelings. Reference oracle for small graphs.
inline Beliefs exact_marginals(const NodeFactorTable& node, const SimilarityMatrix& sim, double lambda) {
    static constexpr double kMaxStates = 1e7;
    const std::size_t n = node.size();
    const std::size_t k = node.labels();
    if (sim.size() != n) {
        throw ShapeError("similarity matrix and node factor table disagree on n");
    }
    if (std::pow(static_cast<double>(k), static_cast<double>(n)) > kMaxStates) {
        throw ConfigError("exact_marginals: k^n exceeds 1e7 joint states");
    }

    std::vector<double> log_off(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            log_off[i * n + j] = lambda * (sim(i, j) - 1.0);
        }
    }
    const auto log_mass = [&](const std::vector<std::size_t>& x) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s += std::log(node(i, x[i]));
            for (std::size_t j = i + 1; j < n; ++j) {
                if (x[i] != x[j]) {
                    s += log_off[i * n + j];
                }
            }
        }
        return s;
    };
    const auto advance = [&](std::vector<std::size_t>& x) {
        for (std::size_t i = 0; i < n; ++i) {
            if (++x[i] < k) {
                return true;
            }
            x[i] = 0;
        }
        return false;
    };

    // Pass 1: the largest log-mass, so pass 2 can exponentiate safely.
    std::vector<std::size_t> x(n, 0);
    double top = -std::numeric_limits<double>::infinity();
    do {
        top = std::max(top, log_mass(x));
    } while (advance(x));

    Matrix<double> marg(n, k, 0.0);
    std::fill(x.begin(), x.end(), 0);
    do {
        const double w = std::exp(log_mass(x) - top);
        for (std::size_t i = 0; i < n; ++i) {
            marg(i, x[i]) += w;
        }
    } while (advance(x));
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t v = 0; v < k; ++v) {
            total += marg(i, v);
        }
        for (std::size_t v = 0; v < k; ++v) {
            marg(i, v) /= total;
        }
    }
    return {std::move(marg)};
}

}  // namespace bpseg

#endif  // BPSEG_BP_HPP
