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

#include "corpusshift/corpus.hpp"
#include "corpusshift/dictionary.hpp"
#include "corpusshift/error.hpp"
#include "corpusshift/io.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace corpusshift {

/// Round half away from zero to `decimals` places.
inline double round_half_away(double value, int decimals = 2) {
    const double scale = std::pow(10.0, decimals);
    const double scaled = value * scale;
    // Values such as 0.125 * 100 land a hair below the half; nudge by a few ulps.
    const double nudged = scaled + std::copysign(std::abs(scaled) * 8 * 2.220446049250313e-16, scaled);
    return std::round(nudged) / scale;
}

/// Percentage frequency of one category in one document.
struct FrequencyRecord {
    std::string document_id;
    std::string label;
    CategoryId category_id = 0;
    std::size_t hit_count = 0;
    std::size_t word_total = 0;
    double frequency = 0.0; ///< 100 * hit_count / word_total, full precision

    /// Frequency at display precision (2 decimals, half away from zero).
    double displayed() const {
        if (word_total > 0) {
            // Exact integer rounding of 10000 * hit / total.
            const auto num = static_cast<unsigned long long>(hit_count) * 20000ULL + word_total;
            const auto hundredths = num / (2ULL * word_total);
            return static_cast<double>(hundredths) / 100.0;
        }
        return round_half_away(frequency, 2);
    }
};

struct WordRankEntry {
    CategoryId category_id = 0;
    std::string word;
    std::size_t count = 0;
    std::size_t rank = 0;

    friend bool operator==(const WordRankEntry&, const WordRankEntry&) = default;
};

struct ChapterDelta {
    std::string label;
    double left = 0.0;
    double right = 0.0;
    double delta = 0.0; ///< left - right at display precision
};

struct ChapterDiff {
    std::vector<ChapterDelta> deltas;
    std::size_t max_index = 0; ///< first label with the largest |delta|

    const ChapterDelta& maximal() const { return deltas.at(max_index); }
};

inline void require_language(const Corpus& corpus, const Dictionary& dict) {
    if (corpus.language() != dict.language()) {
        throw Error(ErrorCode::LanguageMismatch,
                    "corpus '" + corpus.id() + "' is '" + corpus.language() +
                        "' but the dictionary is '" + dict.language() + "'");
    }
}

/// One record per (document, category), in document then category order.
inline std::vector<FrequencyRecord> category_frequencies(const Corpus& corpus, const Dictionary& dict) {
    require_language(corpus, dict);
    const auto& categories = dict.categories();
    std::unordered_map<CategoryId, std::size_t> slot;
    for (std::size_t i = 0; i < categories.size(); ++i) slot.emplace(categories[i].id, i);

    std::vector<FrequencyRecord> out;
    out.reserve(corpus.documents().size() * categories.size());
    for (const auto& doc : corpus.documents()) {
        std::vector<std::size_t> hits(categories.size(), 0);
        std::size_t words = 0;
        for (const auto& sentence : doc.sentences) {
            for (const auto& token : sentence) {
                if (!token.is_word()) continue;
                ++words;
                for (CategoryId id : dict.match(token.normalized)) ++hits[slot.at(id)];
            }
        }
        for (std::size_t c = 0; c < categories.size(); ++c) {
            FrequencyRecord r;
            r.document_id = doc.id;
            r.label = doc.label;
            r.category_id = categories[c].id;
            r.hit_count = hits[c];
            r.word_total = words;
            r.frequency = words == 0 ? 0.0 : 100.0 * static_cast<double>(hits[c]) / static_cast<double>(words);
            out.push_back(std::move(r));
        }
    }
    return out;
}

/// Records of a single category, preserving order.
inline std::vector<FrequencyRecord> select_category(const std::vector<FrequencyRecord>& records,
                                                    CategoryId category) {
    std::vector<FrequencyRecord> out;
    for (const auto& r : records) {
        if (r.category_id == category) out.push_back(r);
    }
    return out;
}

/// Corpus-wide counts of the words that land in `category`, most frequent
/// first, ties in byte order. Ranks run 1..k without gaps.
inline std::vector<WordRankEntry> top_words(const Corpus& corpus, const Dictionary& dict,
                                            CategoryId category, std::size_t k) {
    dict.require_category(category);
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
    std::map<std::string, std::size_t> counts;
    for (const auto& doc : corpus.documents()) {
        for (const auto& sentence : doc.sentences) {
            for (const auto& token : sentence) {
                if (token.is_word() && dict.matches_category(token.normalized, category)) {
                    ++counts[token.normalized];
                }
            }
        }
    }
    std::vector<WordRankEntry> ranked;
    ranked.reserve(counts.size());
    for (const auto& [word, count] : counts) ranked.push_back({category, word, count, 0});
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const WordRankEntry& a, const WordRankEntry& b) { return a.count > b.count; });
    if (ranked.size() > k) ranked.resize(k);
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i].rank = i + 1;
    return ranked;
}

/// Per-label difference left - right between two category series. Values are
/// compared at display precision, which keeps deltas such as 1.53 - 0.86 at
/// exactly 0.67.
inline ChapterDiff chapter_diff(const std::vector<FrequencyRecord>& left,
                                const std::vector<FrequencyRecord>& right, CategoryId left_category,
                                CategoryId right_category) {
    const auto l = select_category(left, left_category);
    const auto r = select_category(right, right_category);
    if (l.size() != r.size()) {
        throw Error(ErrorCode::LabelMismatch, "left has " + std::to_string(l.size()) +
                                                  " labels, right has " + std::to_string(r.size()));
    }
    ChapterDiff diff;
    double best = -1.0;
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (l[i].label != r[i].label) {
            throw Error(ErrorCode::LabelMismatch,
                        "label '" + l[i].label + "' faces '" + r[i].label + "' at position " + std::to_string(i + 1));
        }
        ChapterDelta d;
        d.label = l[i].label;
        d.left = l[i].displayed();
        d.right = r[i].displayed();
        d.delta = round_half_away(d.left - d.right, 2);
        if (std::abs(d.delta) > best) {
            best = std::abs(d.delta);
            diff.max_index = i;
        }
        diff.deltas.push_back(std::move(d));
    }
    return diff;
}

inline ChapterDiff chapter_diff(const std::vector<FrequencyRecord>& left,
                                const std::vector<FrequencyRecord>& right, CategoryId category) {
    return chapter_diff(left, right, category, category);
}

/// Reads a `label,frequency` table (header row optional) into records of the
/// given category. Counts are unknown in this mode and left at zero.
inline std::vector<FrequencyRecord> parse_frequency_table(std::string_view csv, CategoryId category = 0) {
    std::vector<FrequencyRecord> out;
    const auto lines = io::split_lines(csv);
    bool first = true;
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string_view line = io::trim(lines[ln]);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = io::split(line, ',');
        double value = 0.0;
        const bool numeric = fields.size() == 2 && io::parse_double(fields[1], value);
        if (!numeric) {
            if (first) {
                first = false;
                continue; // header
            }
            throw Error(ErrorCode::FormatError, "expected <label>,<frequency>", ln + 1);
        }
        first = false;
        std::string label(io::trim(fields[0]));
        if (label.size() >= 2 && label.front() == '"' && label.back() == '"') {
            label = label.substr(1, label.size() - 2);
        }
        FrequencyRecord r;
        r.document_id = label;
        r.label = std::move(label);
        r.category_id = category;
        r.frequency = value;
        out.push_back(std::move(r));
    }
    if (out.empty()) throw Error(ErrorCode::EmptyInput, "frequency table has no rows");
    return out;
}

/// CSV with columns doc_id, category_name, hit_count, word_total, frequency.
inline void write_frequency_csv(std::ostream& out, const std::vector<FrequencyRecord>& records,
                                const Dictionary& dict) {
    out << "doc_id,category_name,hit_count,word_total,frequency\n";
    for (const auto& r : records) {
        out << io::csv_field(r.document_id) << ',' << io::csv_field(dict.require_category(r.category_id).name)
            << ',' << r.hit_count << ',' << r.word_total << ',' << io::fixed(r.displayed(), 2) << '\n';
    }
}

} // namespace corpusshift
