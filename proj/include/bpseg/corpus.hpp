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

// Document ingestion: Choi-format files, plain-text sentence splitting,
// corpus directory walks, and a seeded generator of labeled synthetic
// embedding corpora.

#ifndef BPSEG_CORPUS_HPP
#define BPSEG_CORPUS_HPP

#include <fnmatch.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bpseg/bp.hpp"
#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/matrix.hpp"
#include "bpseg/rng.hpp"
#include "bpseg/text.hpp"

namespace bpseg {

struct Document {
    std::vector<SentenceRecord> sentences;
    std::optional<Segmentation> gold;

    std::size_t size() const noexcept { return sentences.size(); }
};

/// A line made only of '=' characters, at least ten of them, after trimming.
inline bool is_choi_delimiter(std::string_view line) {
    const auto t = text::trim(line);
    return t.size() >= 10 && std::all_of(t.begin(), t.end(), [](char c) { return c == '='; });
}

inline bool looks_like_choi(std::string_view content) {
    std::istringstream in{std::string(content)};
    std::string line;
    while (std::getline(in, line)) {
        if (is_choi_delimiter(line)) {
            return true;
        }
    }
    return false;
}

/// One sentence per line, segments separated by delimiter lines. Blank lines
/// and repeated, leading or trailing delimiters never create empty segments.
inline Document parse_choi(std::string_view content) {
    Document doc;
    Segmentation gold;
    std::istringstream in{std::string(content)};
    std::string line;
    Label segment = 0;
    bool segment_open = false;
    while (std::getline(in, line)) {
        if (is_choi_delimiter(line)) {
            if (segment_open) {
                ++segment;
                segment_open = false;
            }
            continue;
        }
        const auto t = text::trim(line);
        if (t.empty()) {
            continue;
        }
        doc.sentences.push_back({doc.sentences.size(), std::string(t)});
        gold.labels.push_back(segment);
        segment_open = true;
    }
    if (doc.sentences.empty()) {
        throw FormatError("Choi document contains no sentences");
    }
    gold.k = static_cast<std::size_t>(gold.labels.back()) + 1;
    doc.gold = std::move(gold);
    return doc;
}

/// Inverse of parse_choi for documents with a contiguous gold labeling.
inline std::string write_choi(const Document& doc) {
    static constexpr std::string_view kDelimiter = "==========\n";
    std::string out(kDelimiter);
    for (std::size_t i = 0; i < doc.sentences.size(); ++i) {
        if (i > 0 && doc.gold && doc.gold->labels[i] != doc.gold->labels[i - 1]) {
            out += kDelimiter;
        }
        out += doc.sentences[i].text;
        out += '\n';
    }
    out += kDelimiter;
    return out;
}

/// Rule-based splitter: a sentence ends at '.', '!' or '?' followed by
/// whitespace or end of text, and at every newline. Abbreviations such as
/// "e.g. " are split too.
inline std::vector<SentenceRecord> split_sentences(std::string_view content) {
    std::vector<SentenceRecord> out;
    std::string current;
    const auto flush = [&] {
        const auto t = text::trim(current);
        if (!t.empty()) {
            out.push_back({out.size(), std::string(t)});
        }
        current.clear();
    };
    for (std::size_t i = 0; i < content.size(); ++i) {
        const char c = content[i];
        if (c == '\n') {
            flush();
            continue;
        }
        current += c;
        if ((c == '.' || c == '!' || c == '?') && (i + 1 == content.size() || text::is_space(content[i + 1]))) {
            flush();
        }
    }
    flush();
    if (out.empty()) {
        throw FormatError("no sentences found");
    }
    return out;
}

/// Reads a whole file as UTF-8. Malformed bytes are replaced with U+FFFD
/// and reported on `warn`.
inline std::string read_text_file(const std::filesystem::path& path, std::ostream* warn = &std::cerr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ConfigError("cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string content = ss.str();
    if (const std::size_t bad = text::sanitize_utf8(content); bad != 0 && warn != nullptr) {
        *warn << "warning: " << path.string() << ": replaced " << bad << " invalid UTF-8 byte(s)\n";
    }
    return content;
}

enum class InputFormat { automatic, text, choi };

inline Document parse_document(std::string_view content, InputFormat format = InputFormat::automatic) {
    if (format == InputFormat::choi || (format == InputFormat::automatic && looks_like_choi(content))) {
        return parse_choi(content);
    }
    return {split_sentences(content), std::nullopt};
}

/// Regular files under `root` whose path relative to `root` matches the
/// shell pattern `glob`, sorted. JSON / JSONL files are never documents.
inline std::vector<std::filesystem::path> list_corpus(const std::filesystem::path& root, const std::string& glob = "*") {
    namespace fs = std::filesystem;
    if (!fs::is_directory(root)) {
        throw ConfigError("not a directory: " + root.string());
    }
    std::vector<fs::path> out;
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        const auto ext = entry.path().extension().string();
        if (ext == ".jsonl" || ext == ".json") {
            continue;
        }
        const std::string rel = fs::relative(entry.path(), root).generic_string();
        if (::fnmatch(glob.c_str(), rel.c_str(), 0) == 0) {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct SynthSpec {
    std::size_t num_topics = 4;
    std::vector<std::size_t> segment_lengths;
    std::size_t dim = 64;
    // Topic directions are normalize(c + separation * u_t) for orthonormal
    // c, u_1, ..., so any two topics have cosine exactly 1 / (1 + separation^2).
    double separation = 10.0;
    // Standard deviation of the per-component gaussian noise added to a
    // sentence's topic direction before renormalizing.
    double noise = 0.05;
    std::uint64_t seed = 0;

    void validate() const {
        if (num_topics == 0) {
            throw ConfigError("synth: num_topics must be >= 1");
        }
        if (segment_lengths.empty() || num_topics > segment_lengths.size()) {
            throw ConfigError("synth: need at least num_topics segments");
        }
        if (std::any_of(segment_lengths.begin(), segment_lengths.end(), [](std::size_t l) { return l == 0; })) {
            throw ConfigError("synth: segment lengths must be >= 1");
        }
        if (dim < num_topics + 1) {
            throw ConfigError("synth: dim must exceed num_topics");
        }
        if (!(separation >= 0.0) || !std::isfinite(separation) || !(noise >= 0.0) || !std::isfinite(noise)) {
            throw ConfigError("synth: separation and noise must be finite and >= 0");
        }
    }
};

struct SynthDocument {
    std::vector<SentenceRecord> sentences;
    EmbeddingMatrix embeddings;
    Segmentation gold;          // segment index, contiguous
    std::vector<Label> topics;  // topic of each sentence; segment s uses topic s mod num_topics

    Document document() const { return {sentences, gold}; }
};

/// Topic cosine implied by a separation value.
inline double synth_topic_cosine(double separation) noexcept { return 1.0 / (1.0 + separation * separation); }

inline SynthDocument synth_corpus(const SynthSpec& spec) {
    spec.validate();
    Xoshiro256 rng(spec.seed);
    const std::size_t d = spec.dim;

    // Gram-Schmidt on gaussian draws: basis[0] is the shared direction.
    Matrix<double> basis(spec.num_topics + 1, d);
    for (std::size_t b = 0; b < basis.rows(); ++b) {
        for (;;) {
            auto v = basis.row(b);
            for (double& x : v) {
                x = rng.normal();
            }
            for (std::size_t p = 0; p < b; ++p) {
                const double proj = detail::dot(v, basis.row(p));
                for (std::size_t f = 0; f < d; ++f) {
                    v[f] -= proj * basis(p, f);
                }
            }
            const double norm = std::sqrt(detail::squared_norm(v));
            if (norm > 1e-6) {
                for (double& x : v) {
                    x /= norm;
                }
                break;
            }
        }
    }
    Matrix<double> topics(spec.num_topics, d);
    for (std::size_t t = 0; t < spec.num_topics; ++t) {
        const double scale = 1.0 / std::sqrt(1.0 + spec.separation * spec.separation);
        for (std::size_t f = 0; f < d; ++f) {
            topics(t, f) = (basis(0, f) + spec.separation * basis(t + 1, f)) * scale;
        }
    }

    std::size_t n = 0;
    for (std::size_t len : spec.segment_lengths) {
        n += len;
    }
    Matrix<double> rows(n, d);
    std::vector<SentenceRecord> sentences;
    Segmentation gold;
    gold.k = spec.segment_lengths.size();
    std::vector<Label> topic_of;
    std::size_t i = 0;
    for (std::size_t s = 0; s < spec.segment_lengths.size(); ++s) {
        const std::size_t topic = s % spec.num_topics;
        for (std::size_t r = 0; r < spec.segment_lengths[s]; ++r, ++i) {
            auto v = rows.row(i);
            for (;;) {
                for (std::size_t f = 0; f < d; ++f) {
                    v[f] = topics(topic, f) + (spec.noise > 0.0 ? spec.noise * rng.normal() : 0.0);
                }
                const double norm = std::sqrt(detail::squared_norm(v));
                if (norm > 0.0) {
                    for (double& x : v) {
                        x /= norm;
                    }
                    break;
                }
            }
            sentences.push_back({i, "topic " + std::to_string(topic) + " segment " + std::to_string(s) +
                                            " sentence " + std::to_string(r)});
            gold.labels.push_back(static_cast<Label>(s));
            topic_of.push_back(static_cast<Label>(topic));
        }
    }
    return {std::move(sentences), EmbeddingMatrix(std::move(rows)), std::move(gold), std::move(topic_of)};
}

/// `count` documents with `segments` segments each, lengths drawn uniformly
/// from [min_len, max_len]. Document j uses a seed derived from (seed, j).
inline std::vector<SynthDocument> synth_documents(std::size_t count, std::size_t segments, std::size_t min_len,
                                                  std::size_t max_len, SynthSpec base) {
    if (min_len == 0 || max_len < min_len) {
        throw ConfigError("synth: need 1 <= min_len <= max_len");
    }
    std::vector<SynthDocument> docs;
    docs.reserve(count);
    const std::uint64_t root = base.seed;
    for (std::size_t j = 0; j < count; ++j) {
        Xoshiro256 rng(derive_seed(root, 2 * j));
        base.segment_lengths.assign(segments, 0);
        for (auto& len : base.segment_lengths) {
            len = min_len + static_cast<std::size_t>(rng.below(max_len - min_len + 1));
        }
        base.seed = derive_seed(root, 2 * j + 1);
        docs.push_back(synth_corpus(base));
    }
    return docs;
}

}  // namespace bpseg

#endif  // BPSEG_CORPUS_HPP
