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

// Run orchestration behind the command-line tool: resolve a configuration,
// run one algorithm on one document, evaluate, benchmark a corpus, and emit
// the human and JSONL outputs.

#ifndef BPSEG_APP_HPP
#define BPSEG_APP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "bpseg/bp.hpp"
#include "bpseg/corpus.hpp"
#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"
#include "bpseg/factor_graph.hpp"
#include "bpseg/fast_bp.hpp"
#include "bpseg/kmeans.hpp"
#include "bpseg/metrics.hpp"
#include "bpseg/parallel.hpp"

namespace bpseg {

using Json = nlohmann::ordered_json;

enum class Algorithm { bp, fast_bp, kmeans, gold };

inline std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::bp:
            return "bp";
        case Algorithm::fast_bp:
            return "fast-bp";
        case Algorithm::kmeans:
            return "kmeans";
        case Algorithm::gold:
            return "gold";
    }
    return "?";
}

inline Algorithm parse_algorithm(const std::string& name) {
    if (name == "bp") {
        return Algorithm::bp;
    }
    if (name == "fast-bp") {
        return Algorithm::fast_bp;
    }
    if (name == "kmeans") {
        return Algorithm::kmeans;
    }
    if (name == "gold") {
        return Algorithm::gold;
    }
    throw ConfigError("unknown algorithm '" + name + "' (expected bp, fast-bp, kmeans or gold)");
}

/// Which metrics to compute; Pk / WindowDiff additionally need a contiguous
/// reference.
struct MetricSelection {
    bool ari = true;
    bool nmi = true;
    bool pk = true;
    bool window_diff = true;

    static MetricSelection parse(const std::string& list) {
        MetricSelection m{false, false, false, false};
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) {
            if (item == "ari") {
                m.ari = true;
            } else if (item == "nmi") {
                m.nmi = true;
            } else if (item == "pk") {
                m.pk = true;
            } else if (item == "wd" || item == "windowdiff" || item == "window_diff") {
                m.window_diff = true;
            } else if (item == "all") {
                m = MetricSelection{};
            } else if (!item.empty()) {
                throw ConfigError("unknown metric '" + item + "'");
            }
        }
        return m;
    }
};

/// Algorithm parameters as given by the user; unset values take
/// per-algorithm defaults in `resolve`.
struct AlgorithmParams {
    Algorithm algorithm = Algorithm::bp;
    std::optional<std::size_t> k;
    std::optional<double> lambda;
    std::optional<double> sigma;
    std::optional<std::size_t> iterations;
    double tol = BpOptions::kDefaultTolerance;
    std::uint64_t seed = 0;
    bool include_self_messages = false;
    bool fast_self_term = false;
    bool normalize = false;
    std::size_t kmeans_n_init = 10;
    std::size_t kmeans_max_iter = 300;
    unsigned threads = 1;
};

/// Cap on the number of clusters when k is not given (k-means and full BP).
inline constexpr std::size_t kDefaultClusterCap = 20;

/// Fully resolved parameters for a document of n sentences.
struct ResolvedParams {
    Algorithm algorithm = Algorithm::bp;
    std::size_t k = 0;
    double lambda = 0.0;
    double sigma = 0.0;
    std::size_t iterations = 0;
    double tol = 0.0;
    std::uint64_t seed = 0;
    bool include_self_messages = false;
    bool fast_self_term = false;
    bool normalize = false;
    std::size_t kmeans_n_init = 0;
    std::size_t kmeans_max_iter = 0;

    Json to_json() const {
        Json j;
        j["algorithm"] = to_string(algorithm);
        j["k"] = k;
        j["seed"] = seed;
        switch (algorithm) {
            case Algorithm::bp:
                j["lambda"] = lambda;
                j["iterations"] = iterations;
                j["tol"] = tol;
                j["include_self_messages"] = include_self_messages;
                break;
            case Algorithm::fast_bp:
                j["lambda"] = lambda;
                j["sigma"] = sigma;
                j["iterations"] = iterations;
                j["fast_self_term"] = fast_self_term;
                break;
            case Algorithm::kmeans:
                j["normalize"] = normalize;
                j["n_init"] = kmeans_n_init;
                j["max_iter"] = kmeans_max_iter;
                j["tol"] = tol;
                break;
            case Algorithm::gold:
                break;
        }
        return j;
    }
};

/// Per-algorithm defaults: full BP lambda 0.12 and at most 50 sweeps; fast BP
/// k = n, lambda 300, sigma 10 and 5 iterations; k-means and full BP use
/// k = min(n, 20) unless k is given.
inline ResolvedParams resolve(const AlgorithmParams& p, std::size_t n) {
    ResolvedParams r;
    r.algorithm = p.algorithm;
    r.seed = p.seed;
    r.include_self_messages = p.include_self_messages;
    r.fast_self_term = p.fast_self_term;
    r.normalize = p.normalize;
    r.kmeans_n_init = p.kmeans_n_init;
    r.kmeans_max_iter = p.kmeans_max_iter;
    switch (p.algorithm) {
        case Algorithm::bp:
            r.k = p.k.value_or(std::min(n, kDefaultClusterCap));
            r.lambda = p.lambda.value_or(FactorConfig::kDefaultFullLambda);
            r.iterations = p.iterations.value_or(BpOptions::kDefaultMaxIterations);
            r.tol = p.tol;
            break;
        case Algorithm::fast_bp:
            r.k = p.k.value_or(n);
            r.lambda = p.lambda.value_or(FactorConfig::kDefaultFastLambda);
            r.sigma = p.sigma.value_or(FactorConfig::kDefaultSigma);
            r.iterations = p.iterations.value_or(5);
            break;
        case Algorithm::kmeans:
            r.k = p.k.value_or(std::min(n, kDefaultClusterCap));
            r.iterations = r.kmeans_max_iter;
            r.tol = 1e-4;
            break;
        case Algorithm::gold:
            break;
    }
    if (p.algorithm != Algorithm::gold) {
        if (r.k == 0 || r.k > n) {
            throw ConfigError("k = " + std::to_string(r.k) + " is not in [1, " + std::to_string(n) + "]");
        }
        if (r.iterations == 0) {
            throw ConfigError("iterations must be >= 1");
        }
    }
    return r;
}

/// Rejects parameters that the chosen algorithm would ignore.
inline void check_applicable(const AlgorithmParams& p) {
    const auto reject = [&](bool given, const char* flag) {
        if (given) {
            throw ConfigError(std::string(flag) + " does not apply to algorithm " + to_string(p.algorithm));
        }
    };
    const bool bp = p.algorithm == Algorithm::bp;
    const bool fast = p.algorithm == Algorithm::fast_bp;
    const bool km = p.algorithm == Algorithm::kmeans;
    reject(!fast && p.sigma.has_value(), "--sigma");
    reject(!fast && p.fast_self_term, "--fast-self-term");
    reject(!bp && p.include_self_messages, "--include-self-messages");
    reject(!km && p.normalize, "--normalize");
    reject(km && p.lambda.has_value(), "--lambda");
}

/// Outcome of one algorithm on one document.
struct RunResult {
    ResolvedParams params;
    Segmentation segmentation;
    std::optional<Matrix<double>> scores;  // beliefs (bp) or node + message scores (fast-bp)
    Json report;
};

inline RunResult run_algorithm(const EmbeddingMatrix& embeddings, const AlgorithmParams& params,
                               const std::optional<Segmentation>& gold = std::nullopt, unsigned threads = 1) {
    RunResult out;
    out.params = resolve(params, embeddings.size());
    const ResolvedParams& r = out.params;
    switch (r.algorithm) {
        case Algorithm::bp: {
            FactorConfig cfg = FactorConfig::full(r.k, r.seed);
            cfg.lambda = r.lambda;
            cfg.include_self_messages = r.include_self_messages;
            cfg.threads = threads;
            const BpResult res = run_bp(embeddings, cfg, BpOptions{r.iterations, r.tol});
            out.segmentation = res.segmentation;
            out.scores = res.beliefs.values;
            out.report["iterations_run"] = res.report.iterations_run;
            out.report["converged"] = res.report.converged;
            out.report["max_delta_history"] = res.report.max_delta_history;
            out.report["representatives"] = res.representatives.indices;
            break;
        }
        case Algorithm::fast_bp: {
            FactorConfig cfg = FactorConfig::fast(r.k, r.seed);
            cfg.lambda = r.lambda;
            cfg.sigma = r.sigma;
            cfg.fast_self_term = r.fast_self_term;
            cfg.threads = threads;
            const FastBpResult res = run_fast_bp(embeddings, cfg, r.iterations);
            out.segmentation = compact_labels(res.segmentation);
            // Score columns follow the compacted labels; unused labels are dropped.
            Matrix<double> scores(res.scores.rows(), out.segmentation.k);
            for (std::size_t i = 0; i < scores.rows(); ++i) {
                for (std::size_t c = 0; c < scores.cols(); ++c) {
                    scores(i, c) = res.scores(i, static_cast<std::size_t>(out.segmentation.original_labels[c]));
                }
            }
            out.scores = std::move(scores);
            double largest = 0.0;
            for (double v : res.messages.values.data()) {
                largest = std::max(largest, std::abs(v));
            }
            out.report["iterations_run"] = r.iterations;
            out.report["max_abs_message"] = largest;
            out.report["labels_used"] = out.segmentation.k;
            out.report["representatives"] = res.representatives.indices;
            out.report["original_labels"] = out.segmentation.original_labels;
            break;
        }
        case Algorithm::kmeans: {
            KMeansConfig cfg;
            cfg.k = r.k;
            cfg.max_iter = r.kmeans_max_iter;
            cfg.n_init = r.kmeans_n_init;
            cfg.tol = r.tol;
            cfg.seed = r.seed;
            cfg.normalize = r.normalize;
            cfg.threads = threads;
            const KMeansResult res = kmeans(embeddings, cfg);
            out.segmentation = res.segmentation;
            out.report["inertia"] = res.inertia;
            out.report["iterations_run"] = res.iterations;
            out.report["restart"] = res.restart;
            break;
        }
        case Algorithm::gold: {
            if (!gold) {
                throw ConfigError("the gold algorithm needs a reference segmentation");
            }
            if (gold->size() != embeddings.size()) {
                throw ShapeError("gold labels do not match the number of sentences");
            }
            out.segmentation = *gold;
            out.params.k = gold->k;
            break;
        }
    }
    return out;
}

inline Json metrics_json(const MetricsReport& m, const MetricSelection& sel) {
    Json j;
    j["n"] = m.n;
    if (sel.ari) {
        j["ari"] = m.ari;
    }
    if (sel.nmi) {
        j["nmi"] = m.nmi;
    }
    if (sel.pk && m.pk) {
        j["pk"] = *m.pk;
    }
    if (sel.window_diff && m.window_diff) {
        j["window_diff"] = *m.window_diff;
    }
    return j;
}

inline MetricsReport evaluate_selected(std::span<const Label> predicted, std::span<const Label> gold,
                                       const MetricSelection& sel) {
    return evaluate(predicted, gold, sel.pk || sel.window_diff);
}

// ---------------------------------------------------------------------------
// segment

struct SegmentConfig {
    AlgorithmParams params;
    std::filesystem::path input;
    std::optional<std::filesystem::path> embeddings;
    bool fallback_embed = false;
    std::size_t embed_dim = 256;
    InputFormat format = InputFormat::automatic;
    std::optional<std::filesystem::path> output;
    MetricSelection metrics;
};

struct SegmentOutput {
    Document document;
    RunResult run;
    std::optional<MetricsReport> metrics;
};

/// Embeddings for a document: from `path` if given, else the fallback
/// embedder when allowed. File rows must match the document's sentences.
inline EmbeddingMatrix document_embeddings(const Document& doc, const std::optional<std::filesystem::path>& path,
                                           bool fallback, std::size_t dim, std::uint64_t seed,
                                           std::ostream* warn = nullptr) {
    if (path) {
        std::ifstream in(*path);
        if (!in) {
            throw ConfigError("cannot open embeddings file " + path->string());
        }
        EmbeddingFile file = load_embeddings(in);
        if (file.records.size() != doc.size()) {
            throw ConfigError("embeddings file has " + std::to_string(file.records.size()) +
                              " records but the input has " + std::to_string(doc.size()) + " sentences");
        }
        if (warn != nullptr) {
            for (std::size_t i = 0; i < doc.size(); ++i) {
                if (text::trim(file.records[i].text) != text::trim(doc.sentences[i].text)) {
                    *warn << "warning: sentence " << i << " text differs between input and embeddings file\n";
                    break;
                }
            }
        }
        return std::move(file.embeddings);
    }
    if (!fallback) {
        throw ConfigError("no embeddings: pass --embeddings FILE or --fallback-embed");
    }
    return fallback_embed(doc.sentences, dim, seed);
}

inline SegmentOutput run_segment(const SegmentConfig& cfg, std::ostream* warn = nullptr) {
    SegmentOutput out;
    check_applicable(cfg.params);
    out.document = parse_document(read_text_file(cfg.input, warn), cfg.format);
    const EmbeddingMatrix emb =
        document_embeddings(out.document, cfg.embeddings, cfg.fallback_embed, cfg.embed_dim, cfg.params.seed, warn);
    out.run = run_algorithm(emb, cfg.params, out.document.gold, cfg.params.threads);
    if (out.document.gold) {
        out.metrics = evaluate_selected(out.run.segmentation.labels, out.document.gold->labels, cfg.metrics);
    }
    return out;
}

/// Machine output: a "run" header record, one "sentence" record per input
/// sentence, and a "metrics" record when a reference labeling is present.
/// Labels are 0-based. Nothing time-dependent is written.
inline void write_segment_jsonl(std::ostream& os, const SegmentConfig& cfg, const SegmentOutput& out) {
    Json header;
    header["type"] = "run";
    header["version"] = 1;
    Json config = out.run.params.to_json();
    config["input"] = cfg.input.generic_string();
    config["format"] = cfg.format == InputFormat::choi   ? "choi"
                       : cfg.format == InputFormat::text ? "text"
                                                         : "auto";
    if (cfg.embeddings) {
        config["embeddings"] = cfg.embeddings->generic_string();
    } else {
        config["fallback_embed"] = true;
        config["embed_dim"] = cfg.embed_dim;
    }
    header["config"] = std::move(config);
    header["report"] = out.run.report;
    header["n"] = out.document.size();
    header["segments"] = out.run.segmentation.k;
    os << header.dump() << '\n';

    for (std::size_t i = 0; i < out.document.size(); ++i) {
        Json rec;
        rec["type"] = "sentence";
        rec["index"] = i;
        rec["text"] = out.document.sentences[i].text;
        rec["label"] = out.run.segmentation.labels[i];
        if (out.run.scores) {
            const auto row = out.run.scores->row(i);
            rec["belief"] = std::vector<double>(row.begin(), row.end());
        } else {
            rec["belief"] = nullptr;
        }
        os << rec.dump() << '\n';
    }
    if (out.metrics) {
        Json rec{{"type", "metrics"}};
        rec.update(metrics_json(*out.metrics, cfg.metrics));
        os << rec.dump() << '\n';
    }
}

/// "[Segment 1]: ..." groups in label order, labels shown 1-based.
inline void write_segments_human(std::ostream& os, const Document& doc, const Segmentation& seg) {
    std::map<Label, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < seg.labels.size(); ++i) {
        groups[seg.labels[i]].push_back(i);
    }
    for (const auto& [label, members] : groups) {
        os << "[Segment " << label + 1 << "]:";
        for (std::size_t i : members) {
            os << ' ' << doc.sentences[i].text;
        }
        os << '\n';
    }
}

inline void write_metrics_human(std::ostream& os, const MetricsReport& m, const MetricSelection& sel) {
    const auto flags = os.flags();
    os << std::fixed << std::setprecision(4);
    if (sel.ari) {
        os << "ARI: " << m.ari << '\n';
    }
    if (sel.nmi) {
        os << "NMI: " << m.nmi << '\n';
    }
    if (sel.pk && m.pk) {
        os << "Pk: " << *m.pk << '\n';
    }
    if (sel.window_diff && m.window_diff) {
        os << "WindowDiff: " << *m.window_diff << '\n';
    }
    os.flags(flags);
}

// ---------------------------------------------------------------------------
// eval

/// Reads a labeling from a Choi document (labels from the delimiters), a run
/// output JSONL file ("sentence" records), or whitespace-separated integers.
inline std::vector<Label> read_labels(const std::filesystem::path& path) {
    const std::string content = read_text_file(path, nullptr);
    if (looks_like_choi(content)) {
        return parse_choi(content).gold->labels;
    }
    const auto first = text::trim(content);
    if (first.empty()) {
        throw FormatError("empty label file " + path.string());
    }
    if (first.front() == '{') {
        std::map<std::size_t, Label> by_index;
        std::istringstream in(content);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (text::trim(line).empty()) {
                continue;
            }
            Json j;
            try {
                j = Json::parse(line);
            } catch (const Json::parse_error& e) {
                throw FormatError(std::string("invalid JSON: ") + e.what(), line_no);
            }
            if (j.value("type", std::string{}) != "sentence") {
                continue;
            }
            if (!j.contains("index") || !j.contains("label") || !j["label"].is_number_integer()) {
                throw FormatError("sentence record without integer index/label", line_no);
            }
            if (!by_index.emplace(j["index"].get<std::size_t>(), j["label"].get<Label>()).second) {
                throw FormatError("duplicate sentence index", line_no);
            }
        }
        std::vector<Label> labels;
        for (const auto& [idx, label] : by_index) {
            if (idx != labels.size()) {
                throw FormatError("missing sentence index " + std::to_string(labels.size()) + " in " + path.string());
            }
            labels.push_back(label);
        }
        if (labels.empty()) {
            throw FormatError("no sentence records in " + path.string());
        }
        return labels;
    }
    std::vector<Label> labels;
    std::istringstream in(content);
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(token, &used);
            if (used != token.size()) {
                throw std::invalid_argument(token);
            }
            labels.push_back(static_cast<Label>(v));
        } catch (const std::exception&) {
            throw FormatError("not an integer label: '" + token + "' in " + path.string());
        }
    }
    return labels;
}

inline MetricsReport run_eval(const std::filesystem::path& pred, const std::filesystem::path& gold,
                              const MetricSelection& sel) {
    const auto p = read_labels(pred);
    const auto g = read_labels(gold);
    if (p.size() != g.size()) {
        throw ShapeError("prediction has " + std::to_string(p.size()) + " labels but gold has " +
                         std::to_string(g.size()));
    }
    return evaluate_selected(p, g, sel);
}

// ---------------------------------------------------------------------------
// bench

struct BenchDocument {
    std::string name;
    Document document;
    EmbeddingMatrix embeddings;
};

struct BenchConfig {
    std::vector<Algorithm> algorithms{Algorithm::fast_bp, Algorithm::kmeans};
    AlgorithmParams params;  // params.algorithm is ignored
    MetricSelection metrics;
    unsigned threads = 1;
};

struct BenchDocumentResult {
    std::string name;
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t segments = 0;
    MetricsReport metrics;
};

struct BenchAlgorithmResult {
    Algorithm algorithm = Algorithm::bp;
    std::vector<BenchDocumentResult> documents;
    MetricsSummary summary;
};

struct BenchResult {
    std::vector<BenchAlgorithmResult> algorithms;
};

/// Embeddings for a corpus document at `doc_path`: "<doc>.jsonl" or, failing
/// that, the same stem with a ".jsonl" extension.
inline std::optional<std::filesystem::path> find_embeddings(const std::filesystem::path& doc_path) {
    std::filesystem::path appended = doc_path;
    appended += ".jsonl";
    if (std::filesystem::exists(appended)) {
        return appended;
    }
    std::filesystem::path replaced = doc_path;
    replaced.replace_extension(".jsonl");
    if (std::filesystem::exists(replaced)) {
        return replaced;
    }
    return std::nullopt;
}

/// Loads every document matched by `glob` under `dir`, sorted by path.
inline std::vector<BenchDocument> load_bench_corpus(const std::filesystem::path& dir, const std::string& glob,
                                                    bool fallback, std::size_t dim, std::uint64_t seed,
                                                    std::ostream* warn = nullptr) {
    std::vector<BenchDocument> docs;
    for (const auto& path : list_corpus(dir, glob)) {
        Document doc = parse_choi(read_text_file(path, warn));
        const auto emb_path = find_embeddings(path);
        if (!emb_path && !fallback) {
            throw ConfigError("no embeddings for " + path.string() + " (expected " + path.string() +
                              ".jsonl); pass --fallback-embed to synthesize them");
        }
        EmbeddingMatrix emb = document_embeddings(doc, emb_path, fallback, dim, seed, warn);
        docs.push_back({std::filesystem::relative(path, dir).generic_string(), std::move(doc), std::move(emb)});
    }
    if (docs.empty()) {
        throw ConfigError("empty corpus: no documents under " + dir.string() + " match '" + glob + "'");
    }
    return docs;
}

/// Runs each algorithm on each document; documents may be processed in
/// parallel, results are kept in input order. Document j uses a seed derived
/// from (params.seed, j).
inline BenchResult run_bench(const std::vector<BenchDocument>& docs, const BenchConfig& cfg) {
    if (docs.empty()) {
        throw ConfigError("empty corpus");
    }
    BenchResult result;
    for (Algorithm algo : cfg.algorithms) {
        BenchAlgorithmResult ar;
        ar.algorithm = algo;
        ar.documents.resize(docs.size());
        parallel_for(docs.size(), cfg.threads, [&](std::size_t j) {
            const BenchDocument& doc = docs[j];
            if (!doc.document.gold) {
                throw ConfigError("document " + doc.name + " has no reference segmentation");
            }
            AlgorithmParams p = cfg.params;
            p.algorithm = algo;
            p.seed = derive_seed(cfg.params.seed, j);
            const RunResult run = run_algorithm(doc.embeddings, p, doc.document.gold, 1);
            BenchDocumentResult& dr = ar.documents[j];
            dr.name = doc.name;
            dr.n = doc.embeddings.size();
            dr.k = run.params.k;
            dr.segments = compact_labels(run.segmentation).k;
            dr.metrics = evaluate_selected(run.segmentation.labels, doc.document.gold->labels, cfg.metrics);
        });
        std::vector<MetricsReport> reports;
        reports.reserve(ar.documents.size());
        for (const auto& d : ar.documents) {
            reports.push_back(d.metrics);
        }
        ar.summary = aggregate(reports);
        result.algorithms.push_back(std::move(ar));
    }
    return result;
}

inline Json bench_config_json(const BenchConfig& cfg) {
    Json j;
    std::vector<std::string> names;
    for (Algorithm a : cfg.algorithms) {
        names.push_back(to_string(a));
    }
    j["algorithms"] = names;
    j["seed"] = cfg.params.seed;
    if (cfg.params.k) {
        j["k"] = *cfg.params.k;
    }
    if (cfg.params.lambda) {
        j["lambda"] = *cfg.params.lambda;
    }
    if (cfg.params.sigma) {
        j["sigma"] = *cfg.params.sigma;
    }
    if (cfg.params.iterations) {
        j["iterations"] = *cfg.params.iterations;
    }
    j["tol"] = cfg.params.tol;
    j["include_self_messages"] = cfg.params.include_self_messages;
    j["fast_self_term"] = cfg.params.fast_self_term;
    j["normalize"] = cfg.params.normalize;
    return j;
}

/// Machine output of a benchmark: a "bench" header, one "document" record per
/// (algorithm, document), then one "aggregate" record per algorithm with the
/// mean and population standard deviation of every metric.
inline void write_bench_jsonl(std::ostream& os, const BenchConfig& cfg, const BenchResult& res,
                              const Json& extra_config = Json::object()) {
    Json header;
    header["type"] = "bench";
    header["version"] = 1;
    Json config = bench_config_json(cfg);
    for (const auto& [key, value] : extra_config.items()) {
        config[key] = value;
    }
    header["config"] = std::move(config);
    os << header.dump() << '\n';
    for (const auto& ar : res.algorithms) {
        for (const auto& d : ar.documents) {
            Json rec;
            rec["type"] = "document";
            rec["algorithm"] = to_string(ar.algorithm);
            rec["document"] = d.name;
            rec["k"] = d.k;
            rec["segments"] = d.segments;
            rec["metrics"] = metrics_json(d.metrics, cfg.metrics);
            os << rec.dump() << '\n';
        }
    }
    for (const auto& ar : res.algorithms) {
        Json rec;
        rec["type"] = "aggregate";
        rec["algorithm"] = to_string(ar.algorithm);
        rec["documents"] = ar.summary.count;
        rec["mean"] = metrics_json(ar.summary.mean, cfg.metrics);
        rec["std"] = metrics_json(ar.summary.std, cfg.metrics);
        rec["mean"].erase("n");
        rec["std"].erase("n");
        os << rec.dump() << '\n';
    }
}

/// Mean and standard deviation per algorithm as an aligned text table.
inline void write_bench_table(std::ostream& os, const BenchResult& res) {
    const auto flags = os.flags();
    os << std::left << std::setw(10) << "algorithm" << std::right << std::setw(10) << "ARI" << std::setw(10)
       << "NMI" << std::setw(10) << "ARI sd" << std::setw(10) << "NMI sd" << std::setw(10) << "Pk"
       << std::setw(8) << "docs" << '\n';
    os << std::fixed << std::setprecision(4);
    for (const auto& ar : res.algorithms) {
        os << std::left << std::setw(10) << to_string(ar.algorithm) << std::right << std::setw(10)
           << ar.summary.mean.ari << std::setw(10) << ar.summary.mean.nmi << std::setw(10) << ar.summary.std.ari
           << std::setw(10) << ar.summary.std.nmi << std::setw(10);
        if (ar.summary.mean.pk) {
            os << *ar.summary.mean.pk;
        } else {
            os << "-";
        }
        os << std::setw(8) << ar.summary.count << '\n';
    }
    os.flags(flags);
}

}  // namespace bpseg

#endif  // BPSEG_APP_HPP
