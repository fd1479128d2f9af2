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

#include <cmath>
#include <random>
#include <vector>

#include "bpseg/error.hpp"
#include "bpseg/metrics.hpp"
#include "oracles.hpp"

namespace bpseg {
namespace {

using Labels = std::vector<Label>;

TEST(Ari, Examples) {
    EXPECT_DOUBLE_EQ(ari(Labels{0, 0, 1, 1}, Labels{0, 0, 1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(ari(Labels{0, 0, 1, 1}, Labels{1, 1, 0, 0}), 1.0);
    const Labels p{0, 0, 1, 1}, g{0, 1, 0, 1};
    EXPECT_NEAR(oracle::ari(p, g), -0.5, 1e-15);
    EXPECT_NEAR(ari(p, g), oracle::ari(p, g), 1e-12);
}

TEST(Nmi, Examples) {
    EXPECT_NEAR(nmi(Labels{0, 0, 1, 1, 2}, Labels{2, 2, 0, 0, 1}), 1.0, 1e-12);
    EXPECT_DOUBLE_EQ(nmi(Labels{0, 0, 0, 0}, Labels{0, 0, 1, 1}), 0.0);
    const Labels p{0, 0, 1, 1}, g{0, 1, 0, 1};
    EXPECT_NEAR(oracle::nmi(p, g), 0.0, 1e-15);
    EXPECT_NEAR(nmi(p, g), 0.0, 1e-12);
    EXPECT_DOUBLE_EQ(nmi(Labels{3, 3}, Labels{1, 1}), 1.0);
    EXPECT_DOUBLE_EQ(ari(Labels{3, 3}, Labels{1, 1}), 1.0);
}

TEST(Nmi, Normalizations) {
    const Labels p{0, 0, 1, 1, 2, 2}, g{0, 0, 0, 1, 1, 1};
    const double a = nmi(p, g, NmiNormalization::arithmetic);
    const double geo = nmi(p, g, NmiNormalization::geometric);
    const double mn = nmi(p, g, NmiNormalization::min);
    const double mx = nmi(p, g, NmiNormalization::max);
    EXPECT_LE(mx, a);
    EXPECT_LE(a, mn);
    EXPECT_LE(geo, mn);
    EXPECT_NEAR(a, oracle::nmi(p, g), 1e-12);
}

TEST(Metrics, ShapeMismatch) {
    EXPECT_THROW(ari(Labels{0, 1}, Labels{0}), ShapeError);
    EXPECT_THROW(nmi(Labels{0, 1}, Labels{0}), ShapeError);
}

// Every pair of labelings with n <= 5 items and labels in {0, 1, 2}.
TEST(Metrics, ExhaustiveSmallOracleAgreement) {
    for (std::size_t n = 1; n <= 5; ++n) {
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) total *= 3;
        Labels p(n), g(n);
        for (std::size_t a = 0; a < total; ++a) {
            for (std::size_t i = 0, v = a; i < n; ++i, v /= 3) p[i] = static_cast<Label>(v % 3);
            for (std::size_t b = 0; b < total; ++b) {
                for (std::size_t i = 0, v = b; i < n; ++i, v /= 3) g[i] = static_cast<Label>(v % 3);
                ASSERT_NEAR(ari(p, g), oracle::ari(p, g), 1e-12);
                ASSERT_NEAR(nmi(p, g), oracle::nmi(p, g), 1e-12);
            }
        }
    }
}

TEST(Metrics, RandomPairsSymmetricAndRelabelInvariant) {
    std::mt19937_64 gen(3);
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = 2 + gen() % 11;
        Labels p(n), g(n), q(n);
        for (std::size_t i = 0; i < n; ++i) {
            p[i] = static_cast<Label>(gen() % 4);
            g[i] = static_cast<Label>(gen() % 4);
            q[i] = 7 - 2 * p[i];
        }
        EXPECT_NEAR(ari(p, g), ari(g, p), 1e-12);
        EXPECT_NEAR(nmi(p, g), nmi(g, p), 1e-12);
        EXPECT_NEAR(ari(q, g), ari(p, g), 1e-12);
        EXPECT_NEAR(nmi(q, g), nmi(p, g), 1e-12);
        EXPECT_NEAR(ari(p, g), oracle::ari(p, g), 1e-12);
        EXPECT_NEAR(nmi(p, g), oracle::nmi(p, g), 1e-12);
        EXPECT_LE(ari(p, g), 1.0);
        EXPECT_GE(nmi(p, g), 0.0);
        EXPECT_LE(nmi(p, g), 1.0);
        EXPECT_EQ(ari(p, q) == 1.0, true);
    }
}

TEST(Ari, RandomLabelingsCenterOnZero) {
    std::mt19937_64 gen(5);
    double sum = 0.0;
    for (int t = 0; t < 100; ++t) {
        Labels p(200), g(200);
        for (std::size_t i = 0; i < 200; ++i) {
            p[i] = static_cast<Label>(gen() % 5);
            g[i] = static_cast<Label>(gen() % 5);
        }
        sum += ari(p, g);
    }
    EXPECT_NEAR(sum / 100.0, 0.0, 0.02);
}

const Labels kGold10{0, 0, 0, 0, 0, 1, 1, 1, 1, 1};

TEST(Pk, Examples) {
    EXPECT_DOUBLE_EQ(pk(LabelPair(kGold10, kGold10), 2), 0.0);
    const Labels flat(10, 0);
    EXPECT_NEAR(oracle::pk(flat, kGold10, 2), 0.25, 1e-15);
    EXPECT_DOUBLE_EQ(pk(LabelPair(flat, kGold10), 2), oracle::pk(flat, kGold10, 2));
    const Labels noncontig{0, 1, 0};
    EXPECT_THROW(pk(LabelPair(noncontig, noncontig)), MetricInapplicableError);
}

TEST(WindowDiff, Examples) {
    EXPECT_DOUBLE_EQ(window_diff(LabelPair(kGold10, kGold10), 2), 0.0);
    const Labels extra{0, 0, 1, 1, 1, 2, 2, 2, 2, 2};
    EXPECT_NEAR(window_diff(LabelPair(extra, kGold10), 2), oracle::window_diff(extra, kGold10, 2), 1e-15);
    EXPECT_DOUBLE_EQ(oracle::window_diff(extra, kGold10, 2), 0.25);
    const Labels noncontig{0, 1, 0};
    EXPECT_THROW(window_diff(LabelPair(noncontig, noncontig)), MetricInapplicableError);
}

TEST(WindowMetrics, RandomAgreementWithProbeOracle) {
    std::mt19937_64 gen(8);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + gen() % 30;
        Labels g(n), p(n);
        Label seg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0 && gen() % 4 == 0) ++seg;
            g[i] = seg;
            p[i] = static_cast<Label>(gen() % 3);
        }
        const std::size_t w = 1 + gen() % 5;
        const std::size_t eff = std::min(w, n - 1);
        EXPECT_DOUBLE_EQ(pk(LabelPair(p, g), w), oracle::pk(p, g, eff));
        EXPECT_DOUBLE_EQ(window_diff(LabelPair(p, g), w), oracle::window_diff(p, g, eff));
        EXPECT_DOUBLE_EQ(pk(LabelPair(g, g), w), 0.0);
    }
}

TEST(WindowMetrics, DefaultWindow) {
    EXPECT_EQ(default_window(kGold10), 3u);  // half of mean length 5, rounded
    EXPECT_EQ(default_window(Labels{0, 0, 1, 1, 2, 2}), 2u);
}

TEST(Evaluate, OptionalWindowMetrics) {
    const Labels noncontig{0, 1, 0, 1};
    const auto r = evaluate(noncontig, noncontig);
    EXPECT_FALSE(r.pk.has_value());
    EXPECT_DOUBLE_EQ(r.ari, 1.0);
    const auto c = evaluate(kGold10, kGold10);
    ASSERT_TRUE(c.pk.has_value());
    EXPECT_DOUBLE_EQ(*c.pk, 0.0);
    EXPECT_EQ(c.n, 10u);
}

TEST(Aggregate, Examples) {
    MetricsReport a;
    a.ari = 0.4;
    a.nmi = 0.5;
    a.pk = 0.1;
    a.n = 10;
    MetricsReport b = a;
    b.ari = 0.8;
    b.pk.reset();
    const std::vector<MetricsReport> one{a};
    const auto s1 = aggregate(one);
    EXPECT_DOUBLE_EQ(s1.mean.ari, 0.4);
    EXPECT_DOUBLE_EQ(s1.std.ari, 0.0);
    const std::vector<MetricsReport> two{a, b};
    const auto s2 = aggregate(two);
    EXPECT_NEAR(s2.mean.ari, 0.6, 1e-15);
    EXPECT_NEAR(s2.std.ari, 0.2, 1e-15);
    ASSERT_TRUE(s2.mean.pk.has_value());
    EXPECT_DOUBLE_EQ(*s2.mean.pk, 0.1);
    EXPECT_EQ(s2.count, 2u);
    EXPECT_THROW(aggregate(std::vector<MetricsReport>{}), Error);
}

}  // namespace
}  // namespace bpseg
