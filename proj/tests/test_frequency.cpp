/*
 * Copyright 2026 The corpusshift Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "support.hpp"

#include "corpusshift/frequency.hpp"
#include "corpusshift/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

namespace cs = corpusshift;
using testing_support::anger_dict;
using testing_support::corpus_of;
using testing_support::fixture;

namespace {

std::string repeat_words(const std::string& word, int n) {
    std::string out;
    for (int i = 0; i < n; ++i) out += word + " ";
    return out;
}

const cs::FrequencyRecord& record(const std::vector<cs::FrequencyRecord>& rs, const std::string& doc,
                                  cs::CategoryId cat) {
    for (const auto& r : rs) {
        if (r.document_id == doc && r.category_id == cat) return r;
    }
    throw std::runtime_error("no record");
}

std::vector<cs::FrequencyRecord> table(const char* rel) {
    return cs::parse_frequency_table(cs::io::read_file(fixture(rel)));
}

} // namespace

TEST(Rounding, HalfAwayFromZero) {
    EXPECT_DOUBLE_EQ(cs::round_half_away(0.125), 0.13);
    EXPECT_DOUBLE_EQ(cs::round_half_away(-0.125), -0.13);
    EXPECT_DOUBLE_EQ(cs::round_half_away(1.005), 1.01);
    EXPECT_DOUBLE_EQ(cs::round_half_away(2.675), 2.68);
    EXPECT_DOUBLE_EQ(cs::round_half_away(0.124999), 0.12);
    EXPECT_DOUBLE_EQ(cs::round_half_away(1.53 - 0.86), 0.67);
    EXPECT_DOUBLE_EQ(cs::round_half_away(2.28921599, 4), 2.2892);
}

TEST(Rounding, DisplayedUsesExactCounts) {
    cs::FrequencyRecord r;
    r.hit_count = 1;
    r.word_total = 800; // 0.125 exactly
    r.frequency = 0.125;
    EXPECT_DOUBLE_EQ(r.displayed(), 0.13);
    r.hit_count = 1;
    r.word_total = 3; // 33.333...
    EXPECT_DOUBLE_EQ(r.displayed(), 33.33);
    r.hit_count = 2;
    r.word_total = 3;
    EXPECT_DOUBLE_EQ(r.displayed(), 66.67);
}

TEST(CategoryFrequencies, TwoHitsInHundredWords) {
    const auto c = corpus_of({{"d", "war " + repeat_words("calm", 97) + "fighting . 12 13"}});
    const auto d = anger_dict();
    const auto rs = cs::category_frequencies(c, d);
    ASSERT_EQ(rs.size(), d.categories().size());
    const auto& anger = record(rs, "d", 34);
    EXPECT_EQ(anger.word_total, 99u);
    EXPECT_EQ(anger.hit_count, 2u);
    const auto c100 = corpus_of({{"d", "war fighting " + repeat_words("calm", 98)}});
    const auto& a100 = record(cs::category_frequencies(c100, d), "d", 34);
    EXPECT_EQ(a100.word_total, 100u);
    EXPECT_DOUBLE_EQ(a100.frequency, 2.0);
    EXPECT_EQ(cs::io::fixed(a100.displayed(), 2), "2.00");
}

TEST(CategoryFrequencies, NoMatches) {
    const auto rs = cs::category_frequencies(corpus_of({{"d", "calm quiet still"}}), anger_dict());
    for (const auto& r : rs) {
        EXPECT_EQ(r.hit_count, 0u);
        EXPECT_EQ(r.frequency, 0.0);
    }
}

TEST(CategoryFrequencies, LanguageMismatch) {
    EXPECT_CS_ERROR(cs::category_frequencies(corpus_of({{"d", "war"}}), anger_dict("zh")),
                    cs::ErrorCode::LanguageMismatch);
}

TEST(CategoryFrequencies, ParentDominanceAndBounds) {
    const auto c = cs::load_corpus(fixture("synthetic/en.tsv"), "en");
    const auto d = cs::load_dictionary(fixture("dict/en.dic"), "en", fixture("dict/hierarchy.tsv"));
    const auto rs = cs::category_frequencies(c, d);
    for (const auto& r : rs) {
        EXPECT_LE(r.hit_count, r.word_total);
        EXPECT_GE(r.frequency, 0.0);
        EXPECT_LE(r.frequency, 100.0);
        for (cs::CategoryId anc : d.ancestors(r.category_id)) {
            EXPECT_GE(record(rs, r.document_id, anc).hit_count, r.hit_count);
        }
    }
}

TEST(CategoryFrequencies, SelfConcatenationDoublesCountsKeepsFrequencies) {
    const std::string text = "We fight. The war goes on, and friends kill time. Bitterly!";
    const auto d = anger_dict();
    const auto once = cs::category_frequencies(corpus_of({{"d", text}}), d);
    const auto twice = cs::category_frequencies(corpus_of({{"d", text + "\n\n" + text}}), d);
    ASSERT_EQ(once.size(), twice.size());
    for (std::size_t i = 0; i < once.size(); ++i) {
        EXPECT_EQ(twice[i].hit_count, 2 * once[i].hit_count);
        EXPECT_EQ(twice[i].word_total, 2 * once[i].word_total);
        EXPECT_DOUBLE_EQ(twice[i].frequency, once[i].frequency);
    }
}

TEST(TopWords, HandCount) {
    const auto c = corpus_of({{"a", "war war fight kill"}, {"b", "War fight calm"}});
    const auto top = cs::top_words(c, anger_dict(), 34, 2);
    ASSERT_EQ(top.size(), 2u);
    EXPECT_EQ(top[0], (cs::WordRankEntry{34, "war", 3, 1}));
    EXPECT_EQ(top[1], (cs::WordRankEntry{34, "fight", 2, 2}));
}

TEST(TopWords, LargeKReturnsAllAndTiesAreLexicographic) {
    const auto c = corpus_of({{"a", "kill fight war bitter"}});
    const auto top = cs::top_words(c, anger_dict(), 34, 50);
    ASSERT_EQ(top.size(), 4u);
    EXPECT_EQ(top[0].word, "bitter");
    EXPECT_EQ(top[1].word, "fight");
    EXPECT_EQ(top[2].word, "kill");
    EXPECT_EQ(top[3].word, "war");
    for (std::size_t i = 0; i < top.size(); ++i) EXPECT_EQ(top[i].rank, i + 1);
}

TEST(TopWords, Errors) {
    const auto c = corpus_of({{"a", "war"}});
    EXPECT_CS_ERROR(cs::top_words(c, anger_dict(), 999, 3), cs::ErrorCode::UnknownCategory);
    EXPECT_CS_ERROR(cs::top_words(c, anger_dict(), 34, 0), cs::ErrorCode::InvalidArgument);
}

TEST(ChapterDiff, TableOneChapterTen) {
    const auto diff = cs::chapter_diff(table("tableA_anger.csv"), table("tableB_anger.csv"), 0);
    ASSERT_EQ(diff.deltas.size(), 11u);
    EXPECT_EQ(diff.maximal().label, "10");
    EXPECT_EQ(diff.deltas[9].delta, 0.67);
    EXPECT_EQ(diff.deltas[6].delta, -0.27);
    EXPECT_EQ(diff.deltas[0].delta, 0.54);
}

TEST(ChapterDiff, IdenticalListsGiveZero) {
    const auto a = table("tableA_anger.csv");
    const auto diff = cs::chapter_diff(a, a, 0);
    for (const auto& d : diff.deltas) EXPECT_EQ(d.delta, 0.0);
    EXPECT_EQ(diff.max_index, 0u);
}

TEST(ChapterDiff, LabelMismatch) {
    EXPECT_CS_ERROR(cs::chapter_diff(table("tableA_anger.csv"), table("tableC_anger.csv"), 0),
                    cs::ErrorCode::LabelMismatch);
    auto b = table("tableB_anger.csv");
    b.pop_back();
    EXPECT_CS_ERROR(cs::chapter_diff(table("tableA_anger.csv"), b, 0), cs::ErrorCode::LabelMismatch);
}

TEST(ChapterDiff, CorpusRecordsAcrossDictionaries) {
    const auto en = corpus_of({{"1", "war war calm"}, {"2", "calm calm calm calm"}});
    const auto zh = corpus_of({{"1", "战争 平静"}, {"2", "杀 平静 平静 平静"}}, "zh");
    const auto zd = cs::parse_dic("%\n7\tanger\n%\n战争\t7\n杀*\t7\n", "zh");
    const auto diff = cs::chapter_diff(cs::category_frequencies(en, anger_dict()), cs::category_frequencies(zh, zd),
                                       34, 7);
    ASSERT_EQ(diff.deltas.size(), 2u);
    EXPECT_DOUBLE_EQ(diff.deltas[0].left, 66.67);
    EXPECT_DOUBLE_EQ(diff.deltas[0].right, 50.0);
    EXPECT_DOUBLE_EQ(diff.deltas[0].delta, 16.67);
    EXPECT_DOUBLE_EQ(diff.deltas[1].delta, -25.0);
    EXPECT_EQ(diff.max_index, 1u);
}

TEST(FrequencyTable, Parsing) {
    const auto rs = cs::parse_frequency_table("label,frequency\n1,1.43\n\"ch 2\",0.98\n\n", 34);
    ASSERT_EQ(rs.size(), 2u);
    EXPECT_EQ(rs[1].label, "ch 2");
    EXPECT_EQ(rs[1].category_id, 34);
    EXPECT_DOUBLE_EQ(rs[0].frequency, 1.43);
    EXPECT_NO_THROW(cs::parse_frequency_table("1,2\n"));
    EXPECT_CS_ERROR(cs::parse_frequency_table("label,frequency\n1,abc\n"), cs::ErrorCode::FormatError);
    EXPECT_CS_ERROR(cs::parse_frequency_table("label,frequency\n"), cs::ErrorCode::EmptyInput);
    EXPECT_CS_ERROR(cs::parse_frequency_table("a,b\n1,2,3\n"), cs::ErrorCode::FormatError);
}

TEST(FrequencyTable, CsvOutput) {
    const auto c = corpus_of({{"d1", "war calm calm"}});
    const auto d = anger_dict();
    std::ostringstream out;
    cs::write_frequency_csv(out, cs::select_category(cs::category_frequencies(c, d), 34), d);
    EXPECT_EQ(out.str(), "doc_id,category_name,hit_count,word_total,frequency\nd1,anger,1,3,33.33\n");
}
