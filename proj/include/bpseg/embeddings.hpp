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

// Sentence embeddings: validated storage, cosine similarity, the JSONL
// ingestion format and a deterministic trigram-hashing fallback embedder.

#ifndef BPSEG_EMBEDDINGS_HPP
#define BPSEG_EMBEDDINGS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bpseg/error.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/parallel.hpp"
#include "bpseg/rng.hpp"
#include "bpseg/text.hpp"

namespace bpseg {

struct SentenceRecord {
    std::size_t index = 0;
    std::string text;

    friend bool operator==(const SentenceRecord&, const SentenceRecord&) = default;
};

/// Checks that indices run 0, 1, 2, ... and every text has visible content.
inline void validate_records(std::span<const SentenceRecord> records) {
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].index != i) {
            throw FormatError("sentence indices must be consecutive from 0; found " +
                              std::to_string(records[i].index) + " at position " + std::to_string(i));
        }
        if (text::trim(records[i].text).empty()) {
            throw InvalidInputError("sentence " + std::to_string(i) + " is empty");
        }
    }
}

/// n sentence vectors of dimension d. Every component is finite and no row is
/// all zero; both are checked on construction.
class EmbeddingMatrix {
public:
    explicit EmbeddingMatrix(Matrix<double> rows) : rows_(std::move(rows)) {
        if (rows_.rows() == 0 || rows_.cols() == 0) {
            throw ShapeError("embedding matrix must have n >= 1 rows and d >= 1 columns");
        }
        for (std::size_t i = 0; i < rows_.rows(); ++i) {
            bool nonzero = false;
            for (double v : rows_.row(i)) {
                if (!std::isfinite(v)) {
                    throw InvalidInputError("embedding row " + std::to_string(i) + " has a non-finite component");
                }
                nonzero = nonzero || v != 0.0;
            }
            if (!nonzero) {
                throw InvalidInputError("embedding row " + std::to_string(i) + " is the zero vector");
            }
        }
    }

    std::size_t size() const noexcept { return rows_.rows(); }
    std::size_t dim() const noexcept { return rows_.cols(); }
    std::span<const double> row(std::size_t i) const noexcept { return rows_.row(i); }
    const Matrix<double>& matrix() const noexcept { return rows_; }

    friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

private:
    Matrix<double> rows_;
};

namespace detail {

inline double squared_norm(std::span<const double> u) noexcept {
    double sum = 0.0;
    for (double x : u) {
        sum += x * x;
    }
    return sum;
}

inline double dot(std::span<const double> u, std::span<const double> v) noexcept {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sum += u[i] * v[i];
    }
    return sum;
}

inline double clamped_cosine(double dot, double norm_u, double norm_v) noexcept {
    return std::clamp(dot / (norm_u * norm_v), -1.0, 1.0);
}

}  // namespace detail

/// Cosine similarity, clamped to [-1, 1].
inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw ShapeError("cosine: dimension mismatch (" + std::to_string(u.size()) + " vs " +
                         std::to_string(v.size()) + ")");
    }
    const double nu = std::sqrt(detail::squared_norm(u));
    const double nv = std::sqrt(detail::squared_norm(v));
    if (!std::isfinite(nu) || !std::isfinite(nv)) {
        throw InvalidInputError("cosine: non-finite vector");
    }
    if (nu == 0.0 || nv == 0.0) {
        throw InvalidInputError("cosine: zero-norm vector");
    }
    return detail::clamped_cosine(detail::dot(u, v), nu, nv);
}

/// Symmetric n x n cosine similarity table.
class SimilarityMatrix {
public:
    static constexpr double kTolerance = 1e-12;

    /// Wraps precomputed values after checking symmetry, unit diagonal and range.
    explicit SimilarityMatrix(Matrix<double> values) : values_(std::move(values)) {
        const std::size_t n = values_.rows();
        if (n == 0 || values_.cols() != n) {
            throw ShapeError("similarity matrix must be square and non-empty");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(values_(i, i) - 1.0) > kTolerance) {
                throw InvalidInputError("similarity diagonal must be 1");
            }
            for (std::size_t j = 0; j < n; ++j) {
                const double s = values_(i, j);
                if (!(s >= -1.0 - kTolerance && s <= 1.0 + kTolerance)) {
                    throw InvalidInputError("similarity out of [-1, 1]");
                }
                if (values_(j, i) != s) {
                    throw InvalidInputError("similarity matrix is not symmetric");
                }
            }
        }
    }

    std::size_t size() const noexcept { return values_.rows(); }
    double operator()(std::size_t i, std::size_t j) const noexcept { return values_(i, j); }
    std::span<const double> row(std::size_t i) const noexcept { return values_.row(i); }
    const Matrix<double>& matrix() const noexcept { return values_; }

private:
    Matrix<double> values_;
};

/// Pairwise cosine similarities. Rows may be computed on several threads;
/// every entry is produced by the same fixed-order dot product either way.
inline SimilarityMatrix similarity_matrix(const EmbeddingMatrix& embeddings, unsigned threads = 1) {
    const std::size_t n = embeddings.size();
    std::vector<double> norms(n);
    for (std::size_t i = 0; i < n; ++i) {
        norms[i] = std::sqrt(detail::squared_norm(embeddings.row(i)));
    }
    Matrix<double> values(n, n);
    parallel_for(n, threads, [&](std::size_t i) {
        for (std::size_t j = i; j < n; ++j) {
            values(i, j) = detail::clamped_cosine(detail::dot(embeddings.row(i), embeddings.row(j)), norms[i], norms[j]);
        }
    });
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            values(i, j) = values(j, i);
        }
    }
    return SimilarityMatrix(std::move(values));
}

/// Contents of a JSONL embedding file.
struct EmbeddingFile {
    std::vector<SentenceRecord> records;
    EmbeddingMatrix embeddings;
};

/// Reads `{"index": i, "text": "...", "vector": [...]}` records, one per
/// line. Blank lines are skipped. Records may appear in any order but the
/// indices must cover 0..n-1 exactly once.
inline EmbeddingFile load_embeddings(std::istream& in) {
    struct Row {
        std::size_t line;
        SentenceRecord record;
        std::vector<double> vector;
    };
    std::vector<Row> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!j.is_object()) {
            throw FormatError("record must be a JSON object", line_no);
        }
        const auto index = j.find("index");
        const auto txt = j.find("text");
        const auto vec = j.find("vector");
        if (index == j.end() || !index->is_number_integer() || index->get<std::int64_t>() < 0) {
            throw FormatError("\"index\" must be a non-negative integer", line_no);
        }
        if (txt == j.end() || !txt->is_string()) {
            throw FormatError("\"text\" must be a string", line_no);
        }
        if (vec == j.end() || !vec->is_array() || vec->empty()) {
            throw FormatError("\"vector\" must be a non-empty array of numbers", line_no);
        }
        Row row{line_no, {index->get<std::size_t>(), txt->get<std::string>()}, {}};
        if (text::trim(row.record.text).empty()) {
            throw FormatError("\"text\" is empty", line_no);
        }
        row.vector.reserve(vec->size());
        for (const auto& x : *vec) {
            if (!x.is_number()) {
                throw FormatError("\"vector\" contains a non-number", line_no);
            }
            const double v = x.get<double>();
            if (!std::isfinite(v)) {
                throw FormatError("\"vector\" contains a non-finite component", line_no);
            }
            row.vector.push_back(v);
        }
        if (!rows.empty() && row.vector.size() != rows.front().vector.size()) {
            throw FormatError("ragged dimensions: expected " + std::to_string(rows.front().vector.size()) +
                                  " components, found " + std::to_string(row.vector.size()),
                              line_no);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) {
        throw FormatError("no embedding records");
    }

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.record.index < b.record.index; });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i > 0 && rows[i].record.index == rows[i - 1].record.index) {
            throw FormatError("duplicate index " + std::to_string(rows[i].record.index), rows[i].line);
        }
        if (rows[i].record.index != i) {
            throw FormatError("missing index " + std::to_string(i), rows[i].line);
        }
    }

    const std::size_t n = rows.size();
    const std::size_t d = rows.front().vector.size();
    Matrix<double> m(n, d);
    std::vector<SentenceRecord> records;
    records.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::copy(rows[i].vector.begin(), rows[i].vector.end(), m.row(i).begin());
        if (detail::squared_norm(m.row(i)) == 0.0) {
            throw FormatError("zero vector", rows[i].line);
        }
        records.push_back(std::move(rows[i].record));
    }
    return {std::move(records), EmbeddingMatrix(std::move(m))};
}

/// Writes the JSONL format read by load_embeddings. Floats use the shortest
/// representation that parses back to the same double.
inline void write_embeddings(std::ostream& out, std::span<const SentenceRecord> records,
                             const EmbeddingMatrix& embeddings) {
    if (records.size() != embeddings.size()) {
        throw ShapeError("record count does not match embedding rows");
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        nlohmann::json j;
        j["index"] = records[i].index;
        j["text"] = records[i].text;
        j["vector"] = std::vector<double>(embeddings.row(i).begin(), embeddings.row(i).end());
        out << j.dump() << '\n';
    }
}

namespace detail {

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t basis) noexcept {
    std::uint64_t h = basis;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace detail

/// Hash key of one trigram under `seed`: low bits choose the bucket, the top
/// bit chooses the sign.
inline std::uint64_t trigram_hash(std::string_view trigram, std::uint64_t seed) noexcept {
    std::uint64_t state = detail::fnv1a(trigram, 0xCBF29CE484222325ULL) ^ seed;
    return splitmix64(state);
}

/// Lowercased character trigrams of `sentence`, as UTF-8 byte strings.
/// Texts shorter than three characters yield a single gram of the whole text.
inline std::vector<std::string> char_trigrams(std::string_view sentence) {
    const auto cps = text::lowercase_code_points(text::trim(sentence));
    std::vector<std::string> grams;
    if (cps.size() < 3) {
        std::string whole;
        for (const auto& cp : cps) {
            whole += cp;
        }
        grams.push_back(std::move(whole));
        return grams;
    }
    grams.reserve(cps.size() - 2);
    for (std::size_t i = 0; i + 2 < cps.size(); ++i) {
        grams.push_back(cps[i] + cps[i + 1] + cps[i + 2]);
    }
    return grams;
}

/// Deterministic stand-in for a neural sentence encoder: signed feature
/// hashing of character trigrams into `dim` buckets, then L2 normalization.
inline std::vector<double> fallback_embed_one(std::string_view sentence, std::size_t dim, std::uint64_t seed) {
    if (dim < 16) {
        throw ConfigError("fallback embedding dimension must be >= 16");
    }
    if (text::trim(sentence).empty()) {
        throw InvalidInputError("cannot embed an empty sentence");
    }
    std::vector<double> v(dim, 0.0);
    const auto grams = char_trigrams(sentence);
    for (const auto& g : grams) {
        const std::uint64_t h = trigram_hash(g, seed);
        v[h % dim] += (h >> 63) != 0 ? -1.0 : 1.0;
    }
    double norm = std::sqrt(detail::squared_norm(v));
    if (norm == 0.0) {
        // Every bucket cancelled out; fall back to the first gram's bucket.
        v[trigram_hash(grams.front(), seed) % dim] = 1.0;
        norm = 1.0;
    }
    for (double& x : v) {
        x /= norm;
    }
    return v;
}

inline EmbeddingMatrix fallback_embed(std::span<const SentenceRecord> sentences, std::size_t dim,
                                      std::uint64_t seed) {
    if (sentences.empty()) {
        throw InvalidInputError("no sentences to embed");
    }
    Matrix<double> m(sentences.size(), std::max<std::size_t>(dim, 1));
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        const auto v = fallback_embed_one(sentences[i].text, dim, seed);
        std::copy(v.begin(), v.end(), m.row(i).begin());
    }
    return EmbeddingMatrix(std::move(m));
}

}  // namespace bpseg

#endif  // BPSEG_EMBEDDINGS_HPP
