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
#include <string>
#include <vector>

#include "bpseg/corpus.hpp"
#include "bpseg/error.hpp"
#include "bpseg/kmeans.hpp"
#include "bpseg/metrics.hpp"
#include "test_util.hpp"

namespace bpseg {
namespace {

using Labels = std::vector<Label>;

std::vector<std::string> texts(const Document& d) {
    std::vector<std::string> out;
    for (const auto& s : d.sentences) out.push_back(s.text);
    return out;
}

TEST(ParseChoi, Examples) {
    const auto d = parse_choi("a\n==========\nb\nc\n");
    EXPECT_EQ(texts(d), (std::vector<std::string>{"a", "b", "c"}));
    EXPECT_EQ(d.gold->labels, (Labels{0, 1, 1}));
    EXPECT_EQ(d.gold->k, 2u);

    const auto flat = parse_choi("x\ny\n");
    EXPECT_EQ(flat.gold->labels, (Labels{0, 0}));
    EXPECT_THROW(parse_choi("==========\n  ============  \n"), FormatError);
}

TEST(ParseChoi, DelimiterVariants) {
    const auto d = parse_choi("==========\n\n  a  \n=============\n==========\n\nb\n==========\n");
    EXPECT_EQ(texts(d), (std::vector<std::string>{"a", "b"}));
    EXPECT_EQ(d.gold->labels, (Labels{0, 1}));
    EXPECT_FALSE(is_choi_delimiter("========="));
    EXPECT_TRUE(is_choi_delimiter(" ========== \r"));
    EXPECT_FALSE(is_choi_delimiter("=====x====="));
}

TEST(ParseChoi, RoundTrip) {
    Document doc;
    doc.sentences = {{0, "first"}, {1, "second one"}, {2, "third"}, {3, "fourth."}};
    doc.gold = Segmentation{{0, 0, 1, 2}, 3, {}};
    const auto back = parse_choi(write_choi(doc));
    EXPECT_EQ(texts(back), texts(doc));
    EXPECT_EQ(back.gold->labels, doc.gold->labels);
}

TEST(SplitSentences, Examples) {
    EXPECT_EQ(split_sentences("A. B? C!").size(), 3u);
    EXPECT_EQ(split_sentences("one line no punct").size(), 1u);
    EXPECT_THROW(split_sentences(""), FormatError);
    EXPECT_THROW(split_sentences("  \n \t"), FormatError);
    const auto s = split_sentences("Pi is 3.14 exactly. Next\nline e.g. here");
    EXPECT_EQ(s.size(), 4u);  // "e.g." splits: abbreviations are not handled
    EXPECT_EQ(s[0].text, "Pi is 3.14 exactly.");
    EXPECT_EQ(s[3].index, 3u);
}

TEST(SplitSentences, CoversEveryCharacter) {
    const std::string input = "Hello there.  How are you?\n\nFine!thanks. ok";
    std::string joined, expected;
    for (const auto& r : split_sentences(input)) {
        EXPECT_FALSE(r.text.empty());
        joined += r.text;
    }
    for (char c : input) if (!text::is_space(c)) expected += c;
    std::string joined_ns;
    for (char c : joined) if (!text::is_space(c)) joined_ns += c;
    EXPECT_EQ(joined_ns, expected);
}

TEST(ParseDocument, AutoDetect) {
    EXPECT_TRUE(parse_document("a\n==========\nb\n").gold.has_value());
    EXPECT_FALSE(parse_document("a. b.").gold.has_value());
    EXPECT_EQ(parse_document("a. b.", InputFormat::choi).size(), 1u);
}

TEST(ReadTextFile, ReplacesInvalidUtf8) {
    testing::TempDir dir("read");
    const auto p = dir.write("bad.txt", std::string("ok \xff text\n"));
    std::ostringstream warn;
    const auto s = read_text_file(p, &warn);
    EXPECT_NE(s.find("\xef\xbf\xbd"), std::string::npos);
    EXPECT_NE(warn.str().find("warning"), std::string::npos);
    EXPECT_THROW(read_text_file(dir.path() / "missing.txt", nullptr), ConfigError);
}

TEST(ListCorpus, GlobAndOrder) {
    testing::TempDir dir("list");
    std::filesystem::create_directories(dir.path() / "3-5");
    std::filesystem::create_directories(dir.path() / "6-8");
    dir.write("3-5/b.txt", "x\n");
    dir.write("3-5/a.txt", "x\n");
    dir.write("3-5/a.txt.jsonl", "{}\n");
    dir.write("6-8/c.txt", "x\n");
    const auto all = list_corpus(dir.path());
    ASSERT_EQ(all.size(), 3u);
    EXPECT_EQ(all[0].filename(), "a.txt");
    EXPECT_EQ(list_corpus(dir.path(), "6-8/*").size(), 1u);
    EXPECT_THROW(list_corpus(dir.path() / "nope"), ConfigError);
}

TEST(Synth, NoiseFreeSegmentsAreIdentical) {
    SynthSpec spec;
    spec.noise = 0.0;
    spec.segment_lengths = {3, 4, 2, 5};
    const auto d = synth_corpus(spec);
    EXPECT_NEAR(cosine(d.embeddings.row(0), d.embeddings.row(2)), 1.0, 1e-12);
    EXPECT_NEAR(cosine(d.embeddings.row(3), d.embeddings.row(6)), 1.0, 1e-12);
    EXPECT_NEAR(cosine(d.embeddings.row(0), d.embeddings.row(3)), synth_topic_cosine(spec.separation), 1e-12);
}

TEST(Synth, GoldIsContiguousAndMatchesLengths) {
    SynthSpec spec;
    spec.segment_lengths = {2, 5, 1, 3, 4, 2};
    spec.seed = 4;
    const auto d = synth_corpus(spec);
    EXPECT_EQ(d.gold.labels, (Labels{0, 0, 1, 1, 1, 1, 1, 2, 3, 3, 3, 4, 4, 4, 4, 5, 5}));
    EXPECT_TRUE(is_contiguous(d.gold.labels));
    EXPECT_EQ(d.topics[7], 2);
    EXPECT_EQ(d.topics[11], 0);  // segment 4 reuses topic 0
    for (std::size_t i = 0; i < d.embeddings.size(); ++i)
        EXPECT_NEAR(std::sqrt(detail::squared_norm(d.embeddings.row(i))), 1.0, 1e-12);
}

TEST(Synth, SingleSegment) {
    SynthSpec spec;
    spec.num_topics = 1;
    spec.segment_lengths = {5};
    EXPECT_EQ(synth_corpus(spec).gold.labels, Labels(5, 0));
}

TEST(Synth, KMeansWithTrueKRecoversGold) {
    SynthSpec spec;
    spec.noise = 0.02;
    spec.segment_lengths = {6, 7, 8, 6};
    spec.seed = 3;
    const auto d = synth_corpus(spec);
    KMeansConfig cfg;
    cfg.k = 4;
    EXPECT_DOUBLE_EQ(ari(kmeans(d.embeddings, cfg).segmentation.labels, d.gold.labels), 1.0);
}

TEST(Synth, DeterministicAndValidated) {
    SynthSpec spec;
    spec.segment_lengths = {3, 3, 3, 3};
    spec.seed = 10;
    EXPECT_EQ(synth_corpus(spec).embeddings, synth_corpus(spec).embeddings);
    spec.segment_lengths = {3, 3};
    EXPECT_THROW(synth_corpus(spec), ConfigError);
    const auto docs = synth_documents(3, 4, 6, 8, spec);
    ASSERT_EQ(docs.size(), 3u);
    for (const auto& d : docs) {
        EXPECT_GE(d.embeddings.size(), 24u);
        EXPECT_LE(d.embeddings.size(), 32u);
    }
}

}  // namespace
}  // namespace bpseg
