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
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "test_util.hpp"

namespace bpseg {
namespace {

// Cosine straight from the definition, in long double.
double cosine_oracle(const std::vector<double>& u, const std::vector<double>& v) {
    long double uv = 0, uu = 0, vv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uv += static_cast<long double>(u[i]) * v[i];
        uu += static_cast<long double>(u[i]) * u[i];
        vv += static_cast<long double>(v[i]) * v[i];
    }
    return static_cast<double>(uv / std::sqrt(uu * vv));
}

double cos2(std::vector<double> u, std::vector<double> v) { return cosine(u, v); }

TEST(Cosine, Examples) {
    EXPECT_DOUBLE_EQ(cos2({1, 0}, {1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(cos2({1, 0}, {0, 1}), 0.0);
    EXPECT_NEAR(cos2({1, 0}, {1, 1}), cosine_oracle({1, 0}, {1, 1}), 1e-15);
    EXPECT_NEAR(cos2({1, 0}, {1, 1}), 0.70710678, 1e-8);
    EXPECT_DOUBLE_EQ(cos2({1, 0}, {-1, 0}), -1.0);
}

TEST(Cosine, Errors) {
    EXPECT_THROW(cos2({1, 0}, {1, 0, 0}), ShapeError);
    EXPECT_THROW(cos2({0, 0}, {1, 0}), InvalidInputError);
    EXPECT_THROW(cos2({NAN, 0}, {1, 0}), InvalidInputError);
}

TEST(Cosine, Properties) {
    std::mt19937_64 gen(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> u(7), v(7);
        for (auto& x : u) x = normal(gen);
        for (auto& x : v) x = normal(gen);
        EXPECT_NEAR(cosine(u, u), 1.0, 1e-12);
        EXPECT_EQ(cosine(u, v), cosine(v, u));
        std::vector<double> scaled = u;
        for (auto& x : scaled) x *= 3.7;
        EXPECT_NEAR(cosine(scaled, v), cosine(u, v), 1e-12);
        EXPECT_NEAR(cosine(u, v), cosine_oracle(u, v), 1e-12);
    }
}

TEST(SimilarityMatrix, Examples) {
    const auto same = similarity_matrix(testing::from_rows({{0.3, 0.4}, {0.3, 0.4}}));
    EXPECT_DOUBLE_EQ(same(0, 1), 1.0);
    const auto basis = similarity_matrix(testing::from_rows({{1, 0}, {0, 1}}));
    EXPECT_DOUBLE_EQ(basis(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(basis(1, 1), 1.0);
    const auto three = similarity_matrix(testing::from_rows({{1, 0}, {1, 1}, {0, 1}}));
    EXPECT_NEAR(three(0, 1), cosine_oracle({1, 0}, {1, 1}), 1e-15);
    EXPECT_NEAR(three(0, 2), 0.0, 1e-15);
    EXPECT_NEAR(three(1, 2), cosine_oracle({1, 1}, {0, 1}), 1e-15);
}

TEST(SimilarityMatrix, InvariantsOnRandomInputs) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto e = testing::random_embeddings(2 + seed % 9, 5, seed);
        const auto s = similarity_matrix(e);
        // The constructor re-validates; rebuild from raw values to exercise it.
        EXPECT_NO_THROW(SimilarityMatrix(s.matrix()));
        for (std::size_t i = 0; i < s.size(); ++i) {
            for (std::size_t j = 0; j < s.size(); ++j) {
                const auto ri = e.row(i), rj = e.row(j);
                EXPECT_NEAR(s(i, j), cosine_oracle({ri.begin(), ri.end()}, {rj.begin(), rj.end()}), 1e-12);
            }
        }
    }
}

TEST(SimilarityMatrix, ThreadCountDoesNotChangeValues) {
    const auto e = testing::random_embeddings(40, 16, 3);
    EXPECT_EQ(similarity_matrix(e, 1).matrix(), similarity_matrix(e, 4).matrix());
}

TEST(SimilarityMatrix, RejectsInvalidTables) {
    EXPECT_THROW(SimilarityMatrix(Matrix<double>(2, 3, 1.0)), ShapeError);
    EXPECT_THROW(SimilarityMatrix(Matrix<double>(2, 2, {1.0, 0.5, 0.4, 1.0})), InvalidInputError);
    EXPECT_THROW(SimilarityMatrix(Matrix<double>(2, 2, {0.9, 0.5, 0.5, 1.0})), InvalidInputError);
    EXPECT_THROW(SimilarityMatrix(Matrix<double>(2, 2, {1.0, 1.5, 1.5, 1.0})), InvalidInputError);
}

TEST(EmbeddingMatrix, RejectsZeroAndNonFiniteRows) {
    EXPECT_THROW(EmbeddingMatrix(Matrix<double>(2, 2, {1, 0, 0, 0})), InvalidInputError);
    EXPECT_THROW(EmbeddingMatrix(Matrix<double>(1, 2, {INFINITY, 0})), InvalidInputError);
    EXPECT_THROW(EmbeddingMatrix(Matrix<double>(0, 2)), ShapeError);
}

EmbeddingFile load(const std::string& s) {
    std::istringstream in(s);
    return load_embeddings(in);
}

int error_line(const std::string& s) {
    try {
        load(s);
    } catch (const FormatError& e) {
        return static_cast<int>(e.line());
    }
    return -1;
}

TEST(LoadEmbeddings, WellFormed) {
    const auto f = load(R"({"index": 1, "text": "b", "vector": [0, 1]})"
                        "\n\n"
                        R"({"index": 0, "text": "a", "vector": [1, 0.5]})"
                        "\n");
    ASSERT_EQ(f.embeddings.size(), 2u);
    EXPECT_EQ(f.records[0].text, "a");
    EXPECT_EQ(f.records[1].index, 1u);
    EXPECT_DOUBLE_EQ(f.embeddings.row(0)[1], 0.5);
}

TEST(LoadEmbeddings, ErrorsNameTheLine) {
    const std::string ok = R"({"index": 0, "text": "a", "vector": [1, 2, 3]})";
    EXPECT_EQ(error_line(ok + "\n" + R"({"index": 0, "text": "b", "vector": [1, 2, 3]})"), 2);
    EXPECT_EQ(error_line(ok + "\n" + R"({"index": 1, "text": "b", "vector": [1, 2, 3, 4]})"), 2);
    EXPECT_EQ(error_line(ok + "\n{not json"), 2);
    EXPECT_EQ(error_line(ok + "\n" + R"({"index": 1, "vector": [1, 2, 3]})"), 2);
    EXPECT_EQ(error_line(ok + "\n" + R"({"index": 1, "text": "b", "vector": [0, 0, 0]})"), 2);
    EXPECT_EQ(error_line(ok + "\n" + R"({"index": 1, "text": "b", "vector": [1, "x", 3]})"), 2);
    EXPECT_THROW(load(ok + "\n" + R"({"index": 2, "text": "c", "vector": [1, 2, 3]})"), FormatError);
    EXPECT_THROW(load(""), FormatError);
}

TEST(LoadEmbeddings, RoundTrip) {
    const auto e = testing::random_embeddings(5, 8, 21);
    std::vector<SentenceRecord> recs;
    for (std::size_t i = 0; i < 5; ++i) {
        recs.push_back({i, "sentence \"" + std::to_string(i) + "\" \xc3\xa9"});
    }
    std::ostringstream out;
    write_embeddings(out, recs, e);
    const auto f = load(out.str());
    EXPECT_EQ(f.embeddings, e);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(f.records[i].text, recs[i].text);
    }
}

TEST(FallbackEmbed, Deterministic) {
    const std::vector<SentenceRecord> recs{{0, "The cat sat."}, {1, "The cat sat."}, {2, "the CAT sat."}};
    const auto e = fallback_embed(recs, 64, 5);
    EXPECT_EQ(e, fallback_embed(recs, 64, 5));
    EXPECT_NEAR(cosine(e.row(0), e.row(1)), 1.0, 1e-12);
    EXPECT_NEAR(cosine(e.row(0), e.row(2)), 1.0, 1e-12);  // ASCII case folded
    EXPECT_NEAR(std::sqrt(detail::squared_norm(e.row(0))), 1.0, 1e-12);
}

// Signed hashing oracle: the trigram multisets of "abcdefgh" and "stuvwxyz"
// are disjoint, so the cosine is determined entirely by bucket collisions.
TEST(FallbackEmbed, DisjointTrigramsAgreeWithHashingOracle) {
    const std::string a = "abcdefgh", b = "stuvwxyz";
    const std::size_t dim = 256;
    const std::uint64_t seed = 0;
    auto oracle = [&](const std::string& s) {
        std::vector<double> v(dim, 0.0);
        for (std::size_t i = 0; i + 3 <= s.size(); ++i) {
            const auto h = trigram_hash(s.substr(i, 3), seed);
            v[h % dim] += (h >> 63) ? -1.0 : 1.0;
        }
        return v;
    };
    const auto va = oracle(a), vb = oracle(b);
    const double expected = cosine_oracle(va, vb);
    const auto got = cosine(fallback_embed_one(a, dim, seed), fallback_embed_one(b, dim, seed));
    EXPECT_NEAR(got, expected, 1e-12);
    EXPECT_LT(std::abs(got), 0.3);
}

TEST(FallbackEmbed, Errors) {
    EXPECT_THROW(fallback_embed_one("   ", 64, 0), InvalidInputError);
    EXPECT_THROW(fallback_embed_one("abc", 8, 0), ConfigError);
    EXPECT_NO_THROW(fallback_embed_one("a", 16, 0));
}

TEST(FallbackEmbed, TrigramsAreCodePointBased) {
    const auto grams = char_trigrams("\xc3\xa9t\xc3\xa9s");  // "étés"
    ASSERT_EQ(grams.size(), 2u);
    EXPECT_EQ(grams[0], "\xc3\xa9t\xc3\xa9");
}

}  // namespace
}  // namespace bpseg
