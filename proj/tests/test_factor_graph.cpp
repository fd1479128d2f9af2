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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "bpseg/error.hpp"
#include "bpseg/factor_graph.hpp"
#include "test_util.hpp"

namespace bpseg {
namespace {

TEST(Representatives, SamplingAll) {
    auto r = init_representatives(5, 5, 9);
    std::sort(r.indices.begin(), r.indices.end());
    EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1, 2, 3, 4}));
}

TEST(Representatives, StablePerSeed) {
    const auto a = init_representatives(13, 3, 42);
    EXPECT_EQ(a.indices, init_representatives(13, 3, 42).indices);
    EXPECT_EQ(std::set<std::size_t>(a.indices.begin(), a.indices.end()).size(), 3u);
    EXPECT_NO_THROW(a.validate(13));
}

TEST(Representatives, TooMany) {
    EXPECT_THROW(init_representatives(3, 4, 0), ConfigError);
    EXPECT_THROW(init_representatives(3, 0, 0), ConfigError);
    EXPECT_THROW((Representatives{{0, 0}}).validate(3), ConfigError);
}

SimilarityMatrix sim2(double s) { return SimilarityMatrix(Matrix<double>(2, 2, {1.0, s, s, 1.0})); }

TEST(NodeFactorsFull, Examples) {
    EXPECT_NEAR(node_factors_full(sim2(0.0), {{0}})(0, 0), 2.718281828, 1e-9);
    EXPECT_DOUBLE_EQ(node_factors_full(sim2(0.0), {{0}})(1, 0), 1.0);
    EXPECT_NEAR(node_factors_full(sim2(0.5), {{0}})(1, 0), std::exp(0.5), 1e-15);
    EXPECT_NEAR(node_factors_full(sim2(0.5), {{0}})(1, 0), 1.648721, 1e-6);
}

TEST(EdgeFactorFull, Examples) {
    EXPECT_DOUBLE_EQ(edge_factor_full(sim2(0.3), 0, 1, 1, 1, 0.12), 1.0);
    EXPECT_DOUBLE_EQ(edge_factor_full(sim2(1.0), 0, 1, 0, 1, 0.12), 1.0);
    EXPECT_NEAR(edge_factor_full(sim2(0.0), 0, 1, 0, 1, 0.12), std::exp(-0.12), 1e-15);
    EXPECT_NEAR(edge_factor_full(sim2(0.0), 0, 1, 0, 1, 0.12), 0.886920, 1e-6);
    EXPECT_THROW(edge_factor_full(sim2(0.0), 1, 1, 0, 1, 0.12), ConfigError);
}

TEST(EdgeFactorFull, BoundedAndMonotone) {
    double prev = 0.0;
    for (double s = -1.0; s <= 1.0; s += 0.01) {
        const double f = edge_factor_full(s, 0, 1, 0.7);
        EXPECT_LE(f, 1.0);
        EXPECT_GT(f, prev);
        prev = f;
        EXPECT_EQ(edge_factor_full(s, 2, 2, 0.7), 1.0);
    }
    EXPECT_LT(edge_factor_full(0.999, 0, 1, 0.7), 1.0);
}

TEST(NodeFactors, Ranges) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto s = similarity_matrix(testing::random_embeddings(8, 4, seed));
        const auto reps = init_representatives(8, 3, seed);
        const auto full = node_factors_full(s, reps);
        const auto fast = node_factors_fast(s, reps);
        for (std::size_t i = 0; i < 8; ++i) {
            for (std::size_t x = 0; x < 3; ++x) {
                EXPECT_GE(full(i, x), std::exp(-1.0));
                EXPECT_LE(full(i, x), std::exp(1.0));
                EXPECT_GE(fast(i, x), -1.0);
                EXPECT_LE(fast(i, x), 1.0);
                EXPECT_DOUBLE_EQ(fast(i, x), s(i, reps[x]));
            }
        }
    }
}

TEST(NodeFactorsFast, Examples) {
    const auto s = similarity_matrix(testing::from_rows({{1, 0}, {0, 1}, {-1, 0}}));
    const auto t = node_factors_fast(s, {{0}});
    EXPECT_DOUBLE_EQ(t(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(t(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(t(2, 0), -1.0);
}

TEST(EdgeWeightsFast, Examples) {
    EXPECT_NEAR(edge_weight_fast(1.0, 3, 4, 300.0, 10.0), 300.0 * std::exp(-0.1), 1e-12);
    EXPECT_NEAR(edge_weight_fast(1.0, 3, 4, 300.0, 10.0), 271.4512, 1e-4);
    EXPECT_NEAR(edge_weight_fast(1.0, 0, 10, 300.0, 10.0), 0.013619, 1e-6);

    const auto s = similarity_matrix(testing::random_embeddings(6, 3, 1));
    const auto w = edge_weights_fast(s, 300.0, 10.0);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(w(i, i), 0.0);
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_EQ(w(i, j), w(j, i));
            if (i != j) {
                const double d = static_cast<double>(i) - static_cast<double>(j);
                EXPECT_NEAR(w(i, j), 300.0 * s(i, j) * std::exp(-d * d / 10.0), 1e-10);
            }
        }
    }
    const auto with_self = edge_weights_fast(s, 300.0, 10.0, true);
    EXPECT_DOUBLE_EQ(with_self(2, 2), 300.0);
}

TEST(FactorConfig, Validation) {
    EXPECT_NO_THROW(FactorConfig::full(2).validate(3));
    EXPECT_THROW(FactorConfig::full(4).validate(3), ConfigError);
    auto c = FactorConfig::fast(2);
    EXPECT_DOUBLE_EQ(c.lambda, 300.0);
    c.sigma = 0.0;
    EXPECT_THROW(c.validate(3), ConfigError);
    auto f = FactorConfig::full(2);
    f.lambda = -1.0;
    EXPECT_THROW(f.validate(3), ConfigError);
}

}  // namespace
}  // namespace bpseg
