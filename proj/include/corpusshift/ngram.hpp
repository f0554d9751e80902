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

#pragma once

// Word n-gram (lexical bundle) extraction.
//
// Windows slide over word tokens only; numerals and punctuation are skipped
// rather than treated as breaks. Windows stay inside one sentence unless
// cross_sentence is set, and never span two documents. Overlapping
// occurrences all count.

#include "corpusshift/corpus.hpp"
#include "corpusshift/dictionary.hpp"
#include "corpusshift/error.hpp"
#include "corpusshift/io.hpp"

#include <algorithm>
#include <compare>
#include <map>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

namespace corpusshift {

class NGramSpec {
public:
    NGramSpec() = default;

    NGramSpec(std::size_t n_min, std::size_t n_max, std::size_t min_freq, bool cross_sentence = false,
              bool case_fold = true)
        : n_min_(n_min), n_max_(n_max), min_freq_(min_freq), cross_sentence_(cross_sentence),
          case_fold_(case_fold) {
        if (n_min_ < 1) throw Error(ErrorCode::InvalidArgument, "n_min must be at least 1");
        if (n_max_ < n_min_) throw Error(ErrorCode::InvalidArgument, "n_max must not be below n_min");
        if (min_freq_ < 1) throw Error(ErrorCode::InvalidArgument, "min_freq must be at least 1");
    }

    std::size_t n_min() const noexcept { return n_min_; }
    std::size_t n_max() const noexcept { return n_max_; }
    std::size_t min_freq() const noexcept { return min_freq_; }
    bool cross_sentence() const noexcept { return cross_sentence_; }
    bool case_fold() const noexcept { return case_fold_; }

private:
    std::size_t n_min_ = 3;
    std::size_t n_max_ = 7;
    std::size_t min_freq_ = 3;
    bool cross_sentence_ = false;
    bool case_fold_ = true;
};

/// Where an n-gram starts: sentence index and token position within it.
struct Occurrence {
    std::string document_id;
    std::size_t sentence_index = 0;
    std::size_t start_position = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct NGramEntry {
    std::vector<std::string> tokens;
    std::size_t freq = 0;
    std::vector<Occurrence> occurrences; ///< corpus order

    std::size_t length() const noexcept { return tokens.size(); }

    std::string text() const {
        std::string out;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            if (i > 0) out += ' ';
            out += tokens[i];
        }
        return out;
    }

    friend bool operator==(const NGramEntry&, const NGramEntry&) = default;
};

struct NGramReport {
    std::vector<NGramEntry> entries; ///< descending freq, then length, then tokens
    std::size_t type_count = 0;
    std::size_t token_count = 0;

    void recount() {
        type_count = entries.size();
        token_count = 0;
        for (const auto& e : entries) token_count += e.freq;
    }
};

namespace detail {

struct WordRef {
    const Token* token;
    std::size_t sentence_index;
};

/// Word tokens of a document split into the spans windows may cover.
inline std::vector<std::vector<WordRef>> window_spans(const Document& doc, bool cross_sentence) {
    std::vector<std::vector<WordRef>> spans;
    if (cross_sentence) spans.emplace_back();
    for (const auto& sentence : doc.sentences) {
        if (!cross_sentence) spans.emplace_back();
        for (const auto& token : sentence) {
            if (token.is_word()) spans.back().push_back({&token, token.sentence_index});
        }
    }
    return spans;
}

inline bool entry_order(const NGramEntry& a, const NGramEntry& b) {
    if (a.freq != b.freq) return a.freq > b.freq;
    if (a.length() != b.length()) return a.length() < b.length();
    return a.tokens < b.tokens;
}

} // namespace detail

inline NGramReport extract_ngrams(const Corpus& corpus, const NGramSpec& spec) {
    std::unordered_map<std::string, std::size_t> index;
    std::vector<NGramEntry> all;
    std::string key;
    for (const auto& doc : corpus.documents()) {
        for (const auto& span : detail::window_spans(doc, spec.cross_sentence())) {
            for (std::size_t start = 0; start < span.size(); ++start) {
                key.clear();
                for (std::size_t len = 1; len <= spec.n_max() && start + len <= span.size(); ++len) {
                    const Token& t = *span[start + len - 1].token;
                    if (len > 1) key += '\x1f';
                    key += spec.case_fold() ? t.normalized : t.surface;
                    if (len < spec.n_min()) continue;
                    auto [it, inserted] = index.try_emplace(key, all.size());
                    if (inserted) {
                        NGramEntry e;
                        for (std::size_t k = start; k < start + len; ++k) {
                            e.tokens.push_back(spec.case_fold() ? span[k].token->normalized : span[k].token->surface);
                        }
                        all.push_back(std::move(e));
                    }
                    NGramEntry& e = all[it->second];
                    ++e.freq;
                    e.occurrences.push_back(
                        {doc.id, span[start].sentence_index, span[start].token->position_in_sentence});
                }
            }
        }
    }
    NGramReport report;
    for (auto& e : all) {
        if (e.freq >= spec.min_freq()) report.entries.push_back(std::move(e));
    }
    std::sort(report.entries.begin(), report.entries.end(), detail::entry_order);
    report.recount();
    return report;
}

/// Keeps entries with at least one token in `category`.
inline NGramReport filter_by_category(const NGramReport& report, const Dictionary& dict, CategoryId category) {
    dict.require_category(category);
    NGramReport out;
    for (const auto& e : report.entries) {
        const bool hit = std::any_of(e.tokens.begin(), e.tokens.end(), [&](const std::string& t) {
            return dict.matches_category(unicode::fold_case(t), category);
        });
        if (hit) out.entries.push_back(e);
    }
    out.recount();
    return out;
}

/// CSV with columns ngram, length, freq, doc_distribution ("doc:count;...").
inline void write_ngram_csv(std::ostream& out, const NGramReport& report) {
    out << "ngram,length,freq,doc_distribution\n";
    for (const auto& e : report.entries) {
        std::vector<std::pair<std::string, std::size_t>> per_doc;
        for (const auto& occ : e.occurrences) {
            if (per_doc.empty() || per_doc.back().first != occ.document_id) {
                per_doc.emplace_back(occ.document_id, 0);
            }
            ++per_doc.back().second;
        }
        std::string distribution;
        for (std::size_t i = 0; i < per_doc.size(); ++i) {
            if (i > 0) distribution += ';';
            distribution += per_doc[i].first + ":" + std::to_string(per_doc[i].second);
        }
        out << io::csv_field(e.text()) << ',' << e.length() << ',' << e.freq << ','
            << io::csv_field(distribution) << '\n';
    }
}

} // namespace corpusshift
