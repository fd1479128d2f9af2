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

// Command-line front end. Subcommands: segment, eval, bench, synth, embed.
// Exit codes: 0 success, 1 internal error, 2 usage or configuration error,
// 3 numerical failure.

#ifndef BPSEG_CLI_HPP
#define BPSEG_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "bpseg/app.hpp"
#include "bpseg/corpus.hpp"
#include "bpseg/embeddings.hpp"
#include "bpseg/error.hpp"

namespace bpseg {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

namespace cli_detail {

/// --seed, else BPSEG_SEED, else 0.
inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) {
        return *flag;
    }
    if (const char* env = std::getenv("BPSEG_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const unsigned long long v = std::stoull(env, &used, 0);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw ConfigError(std::string("BPSEG_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

struct ParamFlags {
    std::string algo = "bp";
    std::optional<std::size_t> k;
    std::optional<double> lambda;
    std::optional<double> sigma;
    std::optional<std::size_t> iters;
    double tol = BpOptions::kDefaultTolerance;
    std::optional<std::uint64_t> seed;
    bool include_self_messages = false;
    bool fast_self_term = false;
    bool normalize = false;
    std::size_t n_init = 10;
    unsigned threads = 1;

    AlgorithmParams to_params(Algorithm algorithm) const {
        AlgorithmParams p;
        p.algorithm = algorithm;
        p.k = k;
        p.lambda = lambda;
        p.sigma = sigma;
        p.iterations = iters;
        p.tol = tol;
        p.seed = resolve_seed(seed);
        p.include_self_messages = include_self_messages;
        p.fast_self_term = fast_self_term;
        p.normalize = normalize;
        p.kmeans_n_init = n_init;
        p.threads = threads;
        return p;
    }
};

inline void add_param_flags(CLI::App& app, ParamFlags& f, bool single_algo) {
    if (single_algo) {
        app.add_option("--algo", f.algo, "bp, fast-bp or kmeans")->check(CLI::IsMember({"bp", "fast-bp", "kmeans"}));
    } else {
        app.add_option("--algo", f.algo, "comma-separated list of bp, fast-bp, kmeans, gold");
    }
    app.add_option("--k", f.k, "number of labels (default: n for fast-bp, min(n, 20) otherwise)");
    app.add_option("--lambda", f.lambda, "edge strength (default 0.12 for bp, 300 for fast-bp)");
    app.add_option("--sigma", f.sigma, "fast-bp distance decay (default 10)");
    app.add_option("--iters", f.iters, "iterations (default 50 for bp, 5 for fast-bp)");
    app.add_option("--tol", f.tol, "bp convergence tolerance")->capture_default_str();
    app.add_option("--seed", f.seed, "random seed (default: $BPSEG_SEED, else 0)");
    app.add_flag("--include-self-messages", f.include_self_messages, "bp: include the i -> i message in products");
    app.add_flag("--fast-self-term", f.fast_self_term, "fast-bp: include the j = i term in the message sum");
    app.add_flag("--normalize", f.normalize, "kmeans: L2-normalize embeddings first");
    app.add_option("--n-init", f.n_init, "kmeans restarts")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--threads", f.threads, "worker threads (results do not depend on it)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

inline InputFormat parse_format(const std::string& s) {
    if (s == "auto") {
        return InputFormat::automatic;
    }
    if (s == "text") {
        return InputFormat::text;
    }
    return InputFormat::choi;
}

/// Opens `path` for writing, or returns `fallback` for "-".
class OutputTarget {
public:
    OutputTarget(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (!path.empty() && path != "-") {
            file_.open(path, std::ios::binary);
            if (!file_) {
                throw ConfigError("cannot write " + path);
            }
            stream_ = &file_;
        }
    }

    std::ostream& stream() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

}  // namespace cli_detail

/// Entry point of the bpseg tool; never throws.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    using namespace cli_detail;
    CLI::App app{"bpseg: unsupervised text segmentation with belief propagation", "bpseg"};
    app.require_subcommand(1);
    std::function<int()> action;

    // segment
    ParamFlags seg_flags;
    std::string seg_input;
    std::string seg_embeddings;
    bool seg_fallback = false;
    std::size_t embed_dim = 256;
    std::string seg_format = "auto";
    std::string seg_output;
    std::string seg_metrics = "all";
    bool seg_json = false;
    CLI::App* seg = app.add_subcommand("segment", "segment one document");
    seg->add_option("input", seg_input, "UTF-8 text or Choi-format file")->required();
    add_param_flags(*seg, seg_flags, true);
    seg->add_option("--embeddings", seg_embeddings, "JSONL embeddings file (index, text, vector)");
    seg->add_flag("--fallback-embed", seg_fallback, "use the built-in character-trigram embedder");
    seg->add_option("--embed-dim", embed_dim, "fallback embedding dimension")->capture_default_str();
    seg->add_option("--format", seg_format, "input format")
        ->check(CLI::IsMember({"auto", "text", "choi"}))
        ->capture_default_str();
    seg->add_option("--output", seg_output, "write the JSONL run record here ('-' for stdout)");
    seg->add_option("--metrics", seg_metrics, "metrics when a reference is present: ari,nmi,pk,wd or all")
        ->capture_default_str();
    seg->add_flag("--json", seg_json, "print the JSONL run record instead of the grouped segments");
    seg->callback([&] {
        action = [&]() -> int {
            SegmentConfig cfg;
            cfg.params = seg_flags.to_params(parse_algorithm(seg_flags.algo));
            cfg.input = seg_input;
            if (!seg_embeddings.empty()) {
                cfg.embeddings = seg_embeddings;
            }
            cfg.fallback_embed = seg_fallback;
            cfg.embed_dim = embed_dim;
            cfg.format = parse_format(seg_format);
            cfg.metrics = MetricSelection::parse(seg_metrics);
            const SegmentOutput result = run_segment(cfg, &err);
            if (!seg_output.empty()) {
                OutputTarget target(seg_output, out);
                write_segment_jsonl(target.stream(), cfg, result);
            }
            if (seg_json && seg_output != "-") {
                write_segment_jsonl(out, cfg, result);
            } else if (seg_output != "-") {
                write_segments_human(out, result.document, result.run.segmentation);
                if (result.metrics) {
                    write_metrics_human(out, *result.metrics, cfg.metrics);
                }
            }
            return kExitOk;
        };
    });

    // eval
    std::string eval_pred;
    std::string eval_gold;
    std::string eval_metrics = "all";
    std::string eval_output;
    CLI::App* ev = app.add_subcommand("eval", "compare a predicted labeling with a reference");
    ev->add_option("pred", eval_pred, "labels: run JSONL, Choi file, or whitespace-separated integers")->required();
    ev->add_option("gold", eval_gold, "reference labels, same formats")->required();
    ev->add_option("--metrics", eval_metrics, "ari,nmi,pk,wd or all")->capture_default_str();
    ev->add_option("--output", eval_output, "write a JSON metrics record here ('-' for stdout)");
    ev->callback([&] {
        action = [&]() -> int {
            const MetricSelection sel = MetricSelection::parse(eval_metrics);
            const MetricsReport m = run_eval(eval_pred, eval_gold, sel);
            if (!eval_output.empty()) {
                OutputTarget target(eval_output, out);
                Json rec{{"type", "metrics"}};
                rec.update(metrics_json(m, sel));
                target.stream() << rec.dump() << '\n';
            }
            if (eval_output != "-") {
                write_metrics_human(out, m, sel);
            }
            return kExitOk;
        };
    });

    // bench
    ParamFlags bench_flags;
    bench_flags.algo = "fast-bp,kmeans";
    std::string bench_dir;
    std::string bench_glob = "*";
    bool bench_fallback = false;
    std::string bench_output;
    std::string bench_metrics = "all";
    bool bench_json = false;
    CLI::App* bench = app.add_subcommand("bench", "evaluate algorithms over a directory of Choi documents");
    bench->add_option("corpus", bench_dir, "directory of Choi files, each with <file>.jsonl embeddings")->required();
    add_param_flags(*bench, bench_flags, false);
    bench->add_option("--glob", bench_glob, "shell pattern on paths relative to the corpus")->capture_default_str();
    bench->add_flag("--fallback-embed", bench_fallback, "use the built-in embedder where no .jsonl exists");
    bench->add_option("--embed-dim", embed_dim, "fallback embedding dimension")->capture_default_str();
    bench->add_option("--output", bench_output, "write JSONL results here ('-' for stdout)");
    bench->add_option("--metrics", bench_metrics, "ari,nmi,pk,wd or all")->capture_default_str();
    bench->add_flag("--json", bench_json, "print JSONL results instead of the table");
    bench->callback([&] {
        action = [&]() -> int {
            BenchConfig cfg;
            cfg.algorithms.clear();
            std::stringstream ss(bench_flags.algo);
            std::string name;
            while (std::getline(ss, name, ',')) {
                if (!name.empty()) {
                    cfg.algorithms.push_back(parse_algorithm(name));
                }
            }
            if (cfg.algorithms.empty()) {
                throw ConfigError("--algo lists no algorithm");
            }
            cfg.params = bench_flags.to_params(Algorithm::fast_bp);
            cfg.metrics = MetricSelection::parse(bench_metrics);
            cfg.threads = bench_flags.threads;
            const auto docs = load_bench_corpus(bench_dir, bench_glob, bench_fallback, embed_dim, cfg.params.seed, &err);
            const BenchResult res = run_bench(docs, cfg);
            const Json extra{{"corpus", bench_dir}, {"glob", bench_glob}, {"fallback_embed", bench_fallback}};
            if (!bench_output.empty()) {
                OutputTarget target(bench_output, out);
                write_bench_jsonl(target.stream(), cfg, res, extra);
            }
            if (bench_json && bench_output != "-") {
                write_bench_jsonl(out, cfg, res, extra);
            } else if (bench_output != "-") {
                write_bench_table(out, res);
            }
            return kExitOk;
        };
    });

    // synth
    std::string synth_dir;
    std::size_t synth_docs = 20;
    std::size_t synth_segments = 4;
    std::size_t synth_min = 6;
    std::size_t synth_max = 8;
    SynthSpec synth_spec;
    std::optional<std::uint64_t> synth_seed;
    CLI::App* synth = app.add_subcommand("synth", "write a synthetic labeled corpus (Choi files + embeddings)");
    synth->add_option("dir", synth_dir, "output directory (created if missing)")->required();
    synth->add_option("--docs", synth_docs, "number of documents")->capture_default_str();
    synth->add_option("--segments", synth_segments, "segments per document")->capture_default_str();
    synth->add_option("--topics", synth_spec.num_topics, "distinct topics")->capture_default_str();
    synth->add_option("--min-len", synth_min, "shortest segment")->capture_default_str();
    synth->add_option("--max-len", synth_max, "longest segment")->capture_default_str();
    synth->add_option("--dim", synth_spec.dim, "embedding dimension")->capture_default_str();
    synth->add_option("--separation", synth_spec.separation, "topic separation")->capture_default_str();
    synth->add_option("--noise", synth_spec.noise, "per-component noise")->capture_default_str();
    synth->add_option("--seed", synth_seed, "random seed (default: $BPSEG_SEED, else 0)");
    synth->callback([&] {
        action = [&]() -> int {
            synth_spec.seed = resolve_seed(synth_seed);
            const auto docs = synth_documents(synth_docs, synth_segments, synth_min, synth_max, synth_spec);
            std::filesystem::create_directories(synth_dir);
            for (std::size_t j = 0; j < docs.size(); ++j) {
                std::ostringstream name;
                name << "doc" << std::setw(4) << std::setfill('0') << j << ".txt";
                const std::filesystem::path path = std::filesystem::path(synth_dir) / name.str();
                std::ofstream doc(path, std::ios::binary);
                std::ofstream emb(path.string() + ".jsonl", std::ios::binary);
                if (!doc || !emb) {
                    throw ConfigError("cannot write into " + synth_dir);
                }
                doc << write_choi(docs[j].document());
                write_embeddings(emb, docs[j].sentences, docs[j].embeddings);
            }
            out << "wrote " << docs.size() << " documents to " << synth_dir << '\n';
            return kExitOk;
        };
    });

    // embed
    std::string embed_input;
    std::string embed_output;
    std::string embed_format = "auto";
    std::optional<std::uint64_t> embed_seed;
    CLI::App* embed = app.add_subcommand("embed", "write fallback trigram embeddings for a document as JSONL");
    embed->add_option("input", embed_input, "UTF-8 text or Choi-format file")->required();
    embed->add_option("--output", embed_output, "JSONL destination ('-' or omitted for stdout)");
    embed->add_option("--embed-dim", embed_dim, "embedding dimension")->capture_default_str();
    embed->add_option("--format", embed_format, "input format")
        ->check(CLI::IsMember({"auto", "text", "choi"}))
        ->capture_default_str();
    embed->add_option("--seed", embed_seed, "hash seed (default: $BPSEG_SEED, else 0)");
    embed->callback([&] {
        action = [&]() -> int {
            const Document doc = parse_document(read_text_file(embed_input, &err), parse_format(embed_format));
            const EmbeddingMatrix e = fallback_embed(doc.sentences, embed_dim, resolve_seed(embed_seed));
            OutputTarget target(embed_output, out);
            write_embeddings(target.stream(), doc.sentences, e);
            return kExitOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitConfig;
    }
    try {
        return action ? action() : kExitConfig;
    } catch (const NumericalError& e) {
        err << "bpseg: numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const Error& e) {
        err << "bpseg: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "bpseg: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "bpseg: internal error: " << e.what() << '\n';
        return kExitInternal;
    }
}

}  // namespace bpseg

#endif  // BPSEG_CLI_HPP
