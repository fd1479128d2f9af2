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

// k-means baseline: Lloyd iterations from greedy k-means++ seeds, best of
// n_init restarts by inertia (within-cluster sum of squared distances).

#ifndef BPSEG_KMEANS_HPP
#define BPSEG_KMEANS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "bpseg/bp.hpp"
#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/parallel.hpp"
#include "bpseg/rng.hpp"

namespace bpseg {

struct KMeansConfig {
    std::size_t k = 2;
    std::size_t max_iter = 300;
    std::size_t n_init = 10;
    // Converged when the summed squared center shift falls to tol times the
    // mean per-feature variance of the data.
    double tol = 1e-4;
    std::uint64_t seed = 0;
    bool normalize = false;
    unsigned threads = 1;

    void validate(std::size_t n) const {
        if (k == 0) {
            throw ConfigError("k-means: k must be >= 1");
        }
        if (k > n) {
            throw ConfigError("k-means: k = " + std::to_string(k) + " exceeds the number of points (" +
                              std::to_string(n) + ")");
        }
        if (max_iter == 0 || n_init == 0) {
            throw ConfigError("k-means: max_iter and n_init must be >= 1");
        }
        if (!(tol >= 0.0)) {
            throw ConfigError("k-means: tol must be >= 0");
        }
    }
};

struct KMeansResult {
    Segmentation segmentation;
    double inertia = 0.0;
    Matrix<double> centers;
    std::vector<double> inertia_history;  // of the selected restart, one per assignment step
    std::size_t iterations = 0;
    std::size_t restart = 0;
};

namespace detail {

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

// Greedy k-means++: each new center is the best of 2 + floor(ln k) candidates
// drawn by D^2 sampling.
inline Matrix<double> kmeans_plus_plus(const Matrix<double>& x, std::size_t k, Xoshiro256& rng) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const std::size_t trials = 2 + static_cast<std::size_t>(std::log(static_cast<double>(k)));
    Matrix<double> centers(k, d);

    std::size_t first = static_cast<std::size_t>(rng.below(n));
    std::copy(x.row(first).begin(), x.row(first).end(), centers.row(0).begin());
    std::vector<double> closest(n);
    double potential = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        closest[i] = squared_distance(x.row(i), centers.row(0));
        potential += closest[i];
    }

    std::vector<double> candidate_dist(n);
    for (std::size_t c = 1; c < k; ++c) {
        std::size_t best_candidate = 0;
        double best_potential = std::numeric_limits<double>::infinity();
        std::vector<double> best_dist;
        for (std::size_t t = 0; t < trials; ++t) {
            std::size_t cand = n - 1;
            if (potential > 0.0) {
                const double target = rng.uniform() * potential;
                double acc = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    acc += closest[i];
                    if (acc > target) {
                        cand = i;
                        break;
                    }
                }
            } else {
                cand = static_cast<std::size_t>(rng.below(n));
            }
            double pot = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                candidate_dist[i] = std::min(closest[i], squared_distance(x.row(i), x.row(cand)));
                pot += candidate_dist[i];
            }
            if (pot < best_potential) {
                best_potential = pot;
                best_candidate = cand;
                best_dist = candidate_dist;
            }
        }
        std::copy(x.row(best_candidate).begin(), x.row(best_candidate).end(), centers.row(c).begin());
        closest = std::move(best_dist);
        potential = best_potential;
    }
    return centers;
}

// Nearest center per point (first center wins ties); returns the inertia.
inline double assign_points(const Matrix<double>& x, const Matrix<double>& centers, std::vector<Label>& labels,
                            std::vector<double>& dist) {
    double inertia = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t best = 0;
        double best_d = squared_distance(x.row(i), centers.row(0));
        for (std::size_t c = 1; c < centers.rows(); ++c) {
            const double dd = squared_distance(x.row(i), centers.row(c));
            if (dd < best_d) {
                best_d = dd;
                best = c;
            }
        }
        labels[i] = static_cast<Label>(best);
        dist[i] = best_d;
        inertia += best_d;
    }
    return inertia;
}

inline KMeansResult lloyd(const Matrix<double>& x, Matrix<double> centers, std::size_t max_iter, double tol) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    const std::size_t k = centers.rows();
    std::vector<Label> labels(n, 0);
    std::vector<double> dist(n, 0.0);
    KMeansResult result;

    for (std::size_t it = 0; it < max_iter; ++it) {
        result.inertia_history.push_back(assign_points(x, centers, labels, dist));
        ++result.iterations;

        Matrix<double> updated(k, d, 0.0);
        std::vector<std::size_t> counts(k, 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(labels[i]);
            ++counts[c];
            auto row = updated.row(c);
            const auto xi = x.row(i);
            for (std::size_t f = 0; f < d; ++f) {
                row[f] += xi[f];
            }
        }
        std::vector<bool> taken(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                // Re-seed an empty cluster at the point farthest from its center.
                std::size_t far = n;
                for (std::size_t i = 0; i < n; ++i) {
                    if (!taken[i] && (far == n || dist[i] > dist[far])) {
                        far = i;
                    }
                }
                taken[far] = true;
                dist[far] = 0.0;
                std::copy(x.row(far).begin(), x.row(far).end(), updated.row(c).begin());
                continue;
            }
            for (double& v : updated.row(c)) {
                v /= static_cast<double>(counts[c]);
            }
        }

        double shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            shift += squared_distance(updated.row(c), centers.row(c));
        }
        centers = std::move(updated);
        if (shift <= tol) {
            break;
        }
    }
    result.inertia = assign_points(x, centers, labels, dist);
    result.inertia_history.push_back(result.inertia);
    result.segmentation.labels = std::move(labels);
    result.segmentation.k = k;
    result.centers = std::move(centers);
    return result;
}

}  // namespace detail

/// Copy of `embeddings` with every row scaled to unit length.
inline Matrix<double> l2_normalized(const EmbeddingMatrix& embeddings) {
    Matrix<double> out = embeddings.matrix();
    for (std::size_t i = 0; i < out.rows(); ++i) {
        const double norm = std::sqrt(detail::squared_norm(out.row(i)));
        for (double& v : out.row(i)) {
            v /= norm;
        }
    }
    return out;
}

inline KMeansResult kmeans(const EmbeddingMatrix& embeddings, const KMeansConfig& cfg) {
    cfg.validate(embeddings.size());
    const Matrix<double> x = cfg.normalize ? l2_normalized(embeddings) : embeddings.matrix();
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();

    double mean_variance = 0.0;
    for (std::size_t f = 0; f < d; ++f) {
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += x(i, f);
        }
        mean /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            var += (x(i, f) - mean) * (x(i, f) - mean);
        }
        mean_variance += var / static_cast<double>(n);
    }
    mean_variance /= static_cast<double>(d);
    const double tol = cfg.tol * mean_variance;

    std::vector<KMeansResult> runs(cfg.n_init);
    parallel_for(cfg.n_init, cfg.threads, [&](std::size_t r) {
        Xoshiro256 rng(derive_seed(cfg.seed, r));
        runs[r] = detail::lloyd(x, detail::kmeans_plus_plus(x, cfg.k, rng), cfg.max_iter, tol);
        runs[r].restart = r;
    });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].inertia < runs[best].inertia) {
            best = r;
        }
    }
    return std::move(runs[best]);
}

}  // namespace bpseg

#endif  // BPSEG_KMEANS_HPP
