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

// Category shifts between a source text and its aligned translation.
//
// Every occurrence of a category-bearing source n-gram is checked against
// the target sentences it is aligned with. The classification only looks at
// category presence in those sentences; KWIC context is attached so a reader
// can judge omission versus replacement.

#include "corpusshift/align.hpp"
#include "corpusshift/corpus.hpp"
#include "corpusshift/dictionary.hpp"
#include "corpusshift/error.hpp"
#include "corpusshift/frequency.hpp"
#include "corpusshift/io.hpp"
#include "corpusshift/ngram.hpp"

#include "json.hpp"

#include <algorithm>
#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace corpusshift {

enum class ShiftClass { preserved, dropped, added, unaligned };

inline constexpr std::array<ShiftClass, 4> all_shift_classes{ShiftClass::preserved, ShiftClass::dropped,
                                                             ShiftClass::added, ShiftClass::unaligned};

constexpr std::string_view shift_class_name(ShiftClass c) noexcept {
    switch (c) {
    case ShiftClass::preserved: return "preserved";
    case ShiftClass::dropped: return "dropped";
    case ShiftClass::added: return "added";
    case ShiftClass::unaligned: return "unaligned";
    }
    return "?";
}

inline ShiftClass classify_occurrence(std::size_t source_hits, std::size_t target_hits, bool has_target) {
    if (source_hits < 1) throw Error(ErrorCode::InvalidArgument, "occurrence carries no source category token");
    if (!has_target) return ShiftClass::unaligned;
    if (target_hits == 0) return ShiftClass::dropped;
    if (target_hits > source_hits) return ShiftClass::added;
    return ShiftClass::preserved;
}

/// One concordance line. Contexts count every token, punctuation included.
struct Kwic {
    std::string document_id;
    std::size_t sentence_index = 0;
    std::size_t start_position = 0;
    std::vector<std::string> left;
    std::vector<std::string> node;
    std::vector<std::string> right;

    friend bool operator==(const Kwic&, const Kwic&) = default;
};

namespace detail {

inline std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += ' ';
        out += parts[i];
    }
    return out;
}

inline std::string join(const Sentence& sentence) { return join(sentence_surfaces(sentence)); }

// Tokens of a document in reading order, for contexts that cross sentences.
struct FlatDocument {
    std::vector<const Token*> tokens;
    std::vector<std::size_t> sentence_start; // flat index of each sentence's first token

    explicit FlatDocument(const Document& doc) {
        for (const auto& s : doc.sentences) {
            sentence_start.push_back(tokens.size());
            for (const auto& t : s) tokens.push_back(&t);
        }
    }

    // Node runs from the start token through the n_words-th word token.
    Kwic line(const Document& doc, std::size_t sentence, std::size_t start, std::size_t n_words,
              std::size_t width) const {
        Kwic k;
        k.document_id = doc.id;
        k.sentence_index = sentence;
        k.start_position = start;
        const std::size_t first = sentence_start[sentence] + start;
        std::size_t last = first;
        std::size_t seen = 0;
        for (std::size_t i = first; i < tokens.size(); ++i) {
            if (tokens[i]->is_word() && ++seen == n_words) {
                last = i;
                break;
            }
        }
        for (std::size_t i = first >= width ? first - width : 0; i < first; ++i) k.left.push_back(tokens[i]->surface);
        for (std::size_t i = first; i <= last; ++i) k.node.push_back(tokens[i]->surface);
        for (std::size_t i = last + 1; i < tokens.size() && i <= last + width; ++i) {
            k.right.push_back(tokens[i]->surface);
        }
        return k;
    }
};

} // namespace detail

/// Concordance of a word sequence. Matching is case-insensitive, stays inside
/// a sentence and skips non-word tokens, as n-gram windows do.
inline std::vector<Kwic> kwic(const Corpus& corpus, const std::vector<std::string>& pattern, std::size_t width) {
    if (pattern.empty()) throw Error(ErrorCode::InvalidArgument, "KWIC pattern is empty");
    std::vector<std::string> folded;
    for (const auto& p : pattern) folded.push_back(unicode::fold_case(p));
    std::vector<Kwic> out;
    for (const auto& doc : corpus.documents()) {
        const detail::FlatDocument flat(doc);
        for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
            std::vector<const Token*> words;
            for (const auto& t : doc.sentences[s]) {
                if (t.is_word()) words.push_back(&t);
            }
            for (std::size_t i = 0; i + folded.size() <= words.size(); ++i) {
                bool hit = true;
                for (std::size_t k = 0; k < folded.size() && hit; ++k) hit = words[i + k]->normalized == folded[k];
                if (hit) out.push_back(flat.line(doc, s, words[i]->position_in_sentence, folded.size(), width));
            }
        }
    }
    return out;
}

struct ShiftFinding {
    const NGramEntry* ngram = nullptr; ///< points into ShiftReport::ngrams
    Occurrence occurrence;
    Sentence source_sentence;
    std::vector<Sentence> target_sentences;
    std::size_t source_category_hits = 0;
    std::size_t target_category_hits = 0;
    ShiftClass classification = ShiftClass::preserved;
    Kwic kwic;
};

struct ShiftSummaryRow {
    std::string ngram;
    std::size_t length = 0;
    std::size_t freq = 0;
    std::array<std::size_t, 4> counts{}; ///< indexed by ShiftClass

    std::size_t count(ShiftClass c) const { return counts[static_cast<std::size_t>(c)]; }
};

struct ShiftReport {
    CategoryId source_category = 0;
    CategoryId target_category = 0;
    std::string source_category_name;
    std::string target_category_name;
    std::string source_corpus;
    std::string target_corpus;
    NGramSpec spec;
    std::size_t kwic_width = 0;
    NGramReport ngrams; ///< category-bearing source n-grams
    std::vector<ShiftFinding> findings;
    std::vector<ShiftSummaryRow> summary;
    ChapterDiff per_chapter_deltas;

    ShiftReport() = default;
    ShiftReport(const ShiftReport&) = delete; // findings point into ngrams
    ShiftReport& operator=(const ShiftReport&) = delete;
    ShiftReport(ShiftReport&&) = default;
    ShiftReport& operator=(ShiftReport&&) = default;

    std::size_t total(ShiftClass c) const {
        std::size_t n = 0;
        for (const auto& row : summary) n += row.count(c);
        return n;
    }
};

inline ShiftReport build_shift_report(const ParallelCorpus& pc, const Dictionary& src_dict,
                                      const Dictionary& tgt_dict, CategoryId src_category,
                                      CategoryId tgt_category, const NGramSpec& spec = {},
                                      std::size_t kwic_width = 5) {
    require_language(pc.source(), src_dict);
    require_language(pc.target(), tgt_dict);
    ShiftReport report;
    report.source_category = src_category;
    report.target_category = tgt_category;
    report.source_category_name = src_dict.require_category(src_category).name;
    report.target_category_name = tgt_dict.require_category(tgt_category).name;
    report.source_corpus = pc.source().id();
    report.target_corpus = pc.target().id();
    report.spec = spec;
    report.kwic_width = kwic_width;
    report.ngrams = filter_by_category(extract_ngrams(pc.source(), spec), src_dict, src_category);

    std::vector<detail::FlatDocument> flats;
    for (const auto& doc : pc.source().documents()) flats.emplace_back(doc);

    for (const auto& entry : report.ngrams.entries) {
        ShiftSummaryRow row;
        row.ngram = entry.text();
        row.length = entry.length();
        row.freq = entry.freq;
        std::size_t source_hits = 0;
        for (const auto& t : entry.tokens) {
            if (src_dict.matches_category(unicode::fold_case(t), src_category)) ++source_hits;
        }
        for (const auto& occ : entry.occurrences) {
            ShiftFinding f;
            f.ngram = &entry;
            f.occurrence = occ;
            const SentenceRef ref{occ.document_id, occ.sentence_index};
            f.source_sentence = pc.source_sentence(ref);
            for (const auto& tref : aligned_targets(pc, ref)) {
                const Sentence& ts = pc.target_sentence(tref);
                for (const auto& t : ts) {
                    if (t.is_word() && tgt_dict.matches_category(t.normalized, tgt_category)) ++f.target_category_hits;
                }
                f.target_sentences.push_back(ts);
            }
            f.source_category_hits = source_hits;
            f.classification =
                classify_occurrence(f.source_category_hits, f.target_category_hits, !f.target_sentences.empty());
            const std::size_t d = pc.source().index_of(occ.document_id);
            f.kwic = flats[d].line(pc.source().documents()[d], occ.sentence_index, occ.start_position,
                                   entry.length(), kwic_width);
            ++row.counts[static_cast<std::size_t>(f.classification)];
            report.findings.push_back(std::move(f));
        }
        report.summary.push_back(std::move(row));
    }

    report.per_chapter_deltas = chapter_diff(category_frequencies(pc.source(), src_dict),
                                             category_frequencies(pc.target(), tgt_dict), src_category,
                                             tgt_category);
    return report;
}

inline std::string format_kwic(const Kwic& k) {
    std::string out = detail::join(k.left);
    if (!out.empty()) out += ' ';
    out += "[" + detail::join(k.node) + "]";
    if (!k.right.empty()) out += ' ' + detail::join(k.right);
    return out;
}

inline void render_markdown(std::ostream& out, const ShiftReport& r) {
    out << "# Shift report\n\n";
    out << "- source: `" << r.source_corpus << "`, category " << r.source_category_name << " ("
        << r.source_category << ")\n";
    out << "- target: `" << r.target_corpus << "`, category " << r.target_category_name << " ("
        << r.target_category << ")\n";
    out << "- n-grams: length " << r.spec.n_min() << "-" << r.spec.n_max() << ", min freq " << r.spec.min_freq()
        << (r.spec.cross_sentence() ? ", across sentences" : "") << "\n";
    out << "- findings: " << r.findings.size();
    for (ShiftClass c : all_shift_classes) out << ", " << shift_class_name(c) << " " << r.total(c);
    out << "\n\n";

    out << "## Summary\n\n";
    if (r.summary.empty()) {
        out << "No category-bearing n-grams.\n\n";
    } else {
        out << "| n-gram | n | freq | preserved | dropped | added | unaligned |\n";
        out << "|---|---:|---:|---:|---:|---:|---:|\n";
        for (const auto& row : r.summary) {
            out << "| " << row.ngram << " | " << row.length << " | " << row.freq;
            for (ShiftClass c : all_shift_classes) out << " | " << row.count(c);
            out << " |\n";
        }
        out << "\n";
    }

    out << "## Chapter deltas\n\n";
    if (r.per_chapter_deltas.deltas.empty()) {
        out << "No chapters.\n\n";
    } else {
        out << "| label | source | target | delta |\n";
        out << "|---|---:|---:|---:|\n";
        for (const auto& d : r.per_chapter_deltas.deltas) {
            out << "| " << d.label << " | " << io::fixed(d.left, 2) << " | " << io::fixed(d.right, 2) << " | "
                << io::fixed(d.delta, 2) << " |\n";
        }
        const auto& m = r.per_chapter_deltas.maximal();
        out << "\nLargest difference: " << m.label << " (" << io::fixed(m.delta, 2) << ")\n\n";
    }

    const NGramEntry* current = nullptr;
    std::size_t n = 0;
    for (const auto& f : r.findings) {
        if (f.ngram != current) {
            current = f.ngram;
            n = 0;
            out << "## " << current->text() << "\n\n";
        }
        ++n;
        out << n << ". " << f.occurrence.document_id << " sentence " << f.occurrence.sentence_index
            << ", token " << f.occurrence.start_position << ": **" << shift_class_name(f.classification)
            << "** (source hits " << f.source_category_hits << ", target hits " << f.target_category_hits
            << ")\n";
        out << "   - source: " << format_kwic(f.kwic) << "\n";
        if (f.target_sentences.empty()) {
            out << "   - target: (no aligned sentence)\n";
        } else {
            for (const auto& ts : f.target_sentences) out << "   - target: " << detail::join(ts) << "\n";
        }
        out << "\n";
    }
}

inline nlohmann::ordered_json to_json(const Kwic& k) {
    return {{"document_id", k.document_id},
            {"sentence_index", k.sentence_index},
            {"start_position", k.start_position},
            {"left", k.left},
            {"node", k.node},
            {"right", k.right}};
}

inline nlohmann::ordered_json to_json(const ShiftReport& r) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["source"] = {{"corpus", r.source_corpus},
                   {"category_id", r.source_category},
                   {"category", r.source_category_name}};
    j["target"] = {{"corpus", r.target_corpus},
                   {"category_id", r.target_category},
                   {"category", r.target_category_name}};
    j["spec"] = {{"n_min", r.spec.n_min()},
                 {"n_max", r.spec.n_max()},
                 {"min_freq", r.spec.min_freq()},
                 {"cross_sentence", r.spec.cross_sentence()},
                 {"case_fold", r.spec.case_fold()}};
    ordered_json summary = ordered_json::array();
    for (const auto& row : r.summary) {
        ordered_json o = {{"ngram", row.ngram}, {"length", row.length}, {"freq", row.freq}};
        for (ShiftClass c : all_shift_classes) o[std::string(shift_class_name(c))] = row.count(c);
        summary.push_back(std::move(o));
    }
    j["summary"] = std::move(summary);
    ordered_json deltas = ordered_json::array();
    for (const auto& d : r.per_chapter_deltas.deltas) {
        deltas.push_back({{"label", d.label}, {"source", d.left}, {"target", d.right}, {"delta", d.delta}});
    }
    j["per_chapter_deltas"] = std::move(deltas);
    if (!r.per_chapter_deltas.deltas.empty()) j["max_delta_label"] = r.per_chapter_deltas.maximal().label;
    ordered_json findings = ordered_json::array();
    for (const auto& f : r.findings) {
        ordered_json targets = ordered_json::array();
        for (const auto& ts : f.target_sentences) targets.push_back(sentence_surfaces(ts));
        findings.push_back({{"ngram", f.ngram->text()},
                            {"document_id", f.occurrence.document_id},
                            {"sentence_index", f.occurrence.sentence_index},
                            {"start_position", f.occurrence.start_position},
                            {"classification", std::string(shift_class_name(f.classification))},
                            {"source_category_hits", f.source_category_hits},
                            {"target_category_hits", f.target_category_hits},
                            {"source_sentence", sentence_surfaces(f.source_sentence)},
                            {"target_sentences", std::move(targets)},
                            {"kwic", to_json(f.kwic)}});
    }
    j["findings"] = std::move(findings);
    return j;
}

} // namespace corpusshift
