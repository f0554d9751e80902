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

// Sentence alignment between a source corpus and its translation.
//
// Alignment table (TSV), one row per sentence per group:
//
//   group_id <TAB> S|T <TAB> document_id <TAB> sentence_index
//
// A group with only S rows is an omission (1:0), only T rows an addition
// (0:1). Groups must partition both texts and run monotonically through them.

#include "corpusshift/corpus.hpp"
#include "corpusshift/distributions.hpp"
#include "corpusshift/error.hpp"
#include "corpusshift/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corpusshift {

struct SentenceRef {
    std::string document_id;
    std::size_t sentence_index = 0;

    friend auto operator<=>(const SentenceRef&, const SentenceRef&) = default;
};

enum class AlignmentKind { one_one, one_zero, zero_one, one_two, two_one, two_two };

constexpr std::string_view kind_name(AlignmentKind k) noexcept {
    switch (k) {
    case AlignmentKind::one_one: return "1:1";
    case AlignmentKind::one_zero: return "1:0";
    case AlignmentKind::zero_one: return "0:1";
    case AlignmentKind::one_two: return "1:2";
    case AlignmentKind::two_one: return "2:1";
    case AlignmentKind::two_two: return "2:2";
    }
    return "?";
}

/// Kind for a group with the given side sizes, if it is one of the six
/// supported shapes.
inline std::optional<AlignmentKind> kind_for(std::size_t source, std::size_t target) {
    if (source == 1 && target == 1) return AlignmentKind::one_one;
    if (source == 1 && target == 0) return AlignmentKind::one_zero;
    if (source == 0 && target == 1) return AlignmentKind::zero_one;
    if (source == 1 && target == 2) return AlignmentKind::one_two;
    if (source == 2 && target == 1) return AlignmentKind::two_one;
    if (source == 2 && target == 2) return AlignmentKind::two_two;
    return std::nullopt;
}

struct AlignmentPair {
    std::size_t group_id = 0;
    std::vector<SentenceRef> source_refs;
    std::vector<SentenceRef> target_refs;

    AlignmentKind kind() const { return *kind_for(source_refs.size(), target_refs.size()); }

    friend bool operator==(const AlignmentPair&, const AlignmentPair&) = default;
};

/// Source and target corpora with a validated sentence alignment.
class ParallelCorpus {
public:
    /// Checks every invariant; throws DanglingReference, DoubleAssignment,
    /// NonMonotonic, Unassigned or FormatError.
    ParallelCorpus(Corpus source, Corpus target, std::vector<AlignmentPair> pairs)
        : source_(std::move(source)), target_(std::move(target)), pairs_(std::move(pairs)) {
        validate();
    }

    const Corpus& source() const noexcept { return source_; }
    const Corpus& target() const noexcept { return target_; }
    const std::vector<AlignmentPair>& pairs() const noexcept { return pairs_; }

    /// Pair holding a source sentence, or nullptr.
    const AlignmentPair* pair_of_source(const SentenceRef& ref) const {
        auto it = source_pair_.find(ref);
        return it == source_pair_.end() ? nullptr : &pairs_[it->second];
    }

    const Sentence& source_sentence(const SentenceRef& ref) const { return sentence(source_, ref); }
    const Sentence& target_sentence(const SentenceRef& ref) const { return sentence(target_, ref); }

private:
    static const Sentence& sentence(const Corpus& corpus, const SentenceRef& ref) {
        const Document* doc = corpus.find(ref.document_id);
        if (doc == nullptr || ref.sentence_index >= doc->sentences.size()) {
            throw Error(ErrorCode::DanglingReference, describe(ref) + " is not in corpus '" + corpus.id() + "'");
        }
        return doc->sentences[ref.sentence_index];
    }

    static std::string describe(const SentenceRef& ref) {
        return "sentence " + std::to_string(ref.sentence_index) + " of '" + ref.document_id + "'";
    }

    // Global position of a sentence in corpus order.
    static std::size_t ordinal(const Corpus& corpus, const std::vector<std::size_t>& offsets,
                               const SentenceRef& ref) {
        const std::size_t d = corpus.index_of(ref.document_id);
        if (d == Corpus::npos || ref.sentence_index >= corpus.documents()[d].sentences.size()) {
            throw Error(ErrorCode::DanglingReference, describe(ref) + " is not in corpus '" + corpus.id() + "'");
        }
        return offsets[d] + ref.sentence_index;
    }

    static std::vector<std::size_t> offsets_of(const Corpus& corpus, std::size_t& total) {
        std::vector<std::size_t> offsets;
        total = 0;
        for (const auto& doc : corpus.documents()) {
            offsets.push_back(total);
            total += doc.sentences.size();
        }
        return offsets;
    }

    void validate() {
        std::size_t source_total = 0;
        std::size_t target_total = 0;
        const auto source_offsets = offsets_of(source_, source_total);
        const auto target_offsets = offsets_of(target_, target_total);
        std::vector<bool> source_seen(source_total, false);
        std::vector<bool> target_seen(target_total, false);

        // Ordinals first, so dangling references and double assignment are
        // reported before shape and order problems.
        std::vector<std::vector<std::size_t>> src_ord(pairs_.size());
        std::vector<std::vector<std::size_t>> tgt_ord(pairs_.size());
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            for (const auto& ref : pairs_[p].source_refs) {
                const std::size_t o = ordinal(source_, source_offsets, ref);
                if (source_seen[o]) {
                    throw Error(ErrorCode::DoubleAssignment, "source " + describe(ref) + " is in more than one group");
                }
                source_seen[o] = true;
                src_ord[p].push_back(o);
            }
            for (const auto& ref : pairs_[p].target_refs) {
                const std::size_t o = ordinal(target_, target_offsets, ref);
                if (target_seen[o]) {
                    throw Error(ErrorCode::DoubleAssignment, "target " + describe(ref) + " is in more than one group");
                }
                target_seen[o] = true;
                tgt_ord[p].push_back(o);
            }
        }

        std::size_t next_source = 0;
        std::size_t next_target = 0;
        for (std::size_t p = 0; p < pairs_.size(); ++p) {
            auto& pair = pairs_[p];
            if (!kind_for(pair.source_refs.size(), pair.target_refs.size())) {
                throw Error(ErrorCode::FormatError,
                            "group " + std::to_string(pair.group_id) + " is " +
                                std::to_string(pair.source_refs.size()) + ":" +
                                std::to_string(pair.target_refs.size()) +
                                "; supported shapes are 1:1, 1:0, 0:1, 1:2, 2:1 and 2:2");
            }
            const auto check_side = [&](std::vector<std::size_t>& ord, std::vector<SentenceRef>& refs,
                                        std::size_t& next, const char* side) {
                // Keep refs in text order.
                std::vector<std::size_t> perm(ord.size());
                for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
                std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return ord[a] < ord[b]; });
                std::vector<SentenceRef> sorted_refs;
                std::vector<std::size_t> sorted_ord;
                for (std::size_t i : perm) {
                    sorted_refs.push_back(refs[i]);
                    sorted_ord.push_back(ord[i]);
                }
                refs = std::move(sorted_refs);
                ord = std::move(sorted_ord);
                for (std::size_t o : ord) {
                    if (o != next) {
                        throw Error(ErrorCode::NonMonotonic,
                                    std::string(side) + " side of group " + std::to_string(pair.group_id) +
                                        " does not continue the text order (expected sentence #" +
                                        std::to_string(next) + ", found #" + std::to_string(o) + ")");
                    }
                    ++next;
                }
            };
            check_side(src_ord[p], pair.source_refs, next_source, "source");
            check_side(tgt_ord[p], pair.target_refs, next_target, "target");
            for (const auto& ref : pair.source_refs) source_pair_.emplace(ref, p);
        }
        if (next_source != source_total) {
            throw Error(ErrorCode::Unassigned, std::to_string(source_total - next_source) +
                                                   " source sentence(s) belong to no group");
        }
        if (next_target != target_total) {
            throw Error(ErrorCode::Unassigned, std::to_string(target_total - next_target) +
                                                   " target sentence(s) belong to no group");
        }
    }

    Corpus source_;
    Corpus target_;
    std::vector<AlignmentPair> pairs_;
    std::map<SentenceRef, std::size_t> source_pair_;
};

/// Parses an alignment table against the two corpora. Pairs are ordered by
/// group id. Blank and '#' lines are skipped.
inline ParallelCorpus load_alignment(Corpus source, Corpus target, std::string_view table) {
    std::map<std::size_t, AlignmentPair> groups;
    const auto lines = io::split_lines(table);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string_view line = io::trim(lines[ln]);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = io::split(line, '\t');
        long long group = 0;
        long long sentence = 0;
        if (fields.size() != 4 || !io::parse_int(fields[0], group) || group < 0 ||
            (fields[1] != "S" && fields[1] != "T") || fields[2].empty() || !io::parse_int(fields[3], sentence) ||
            sentence < 0) {
            throw Error(ErrorCode::FormatError, "expected group_id<TAB>S|T<TAB>document_id<TAB>sentence_index",
                        ln + 1);
        }
        auto& pair = groups[static_cast<std::size_t>(group)];
        pair.group_id = static_cast<std::size_t>(group);
        SentenceRef ref{std::string(fields[2]), static_cast<std::size_t>(sentence)};
        const Corpus& corpus = fields[1] == "S" ? source : target;
        const Document* doc = corpus.find(ref.document_id);
        if (doc == nullptr || ref.sentence_index >= doc->sentences.size()) {
            throw Error(ErrorCode::DanglingReference,
                        "sentence " + std::to_string(ref.sentence_index) + " of '" + ref.document_id +
                            "' is not in corpus '" + corpus.id() + "'",
                        ln + 1);
        }
        (fields[1] == "S" ? pair.source_refs : pair.target_refs).push_back(std::move(ref));
    }
    std::vector<AlignmentPair> pairs;
    pairs.reserve(groups.size());
    for (auto& [id, pair] : groups) pairs.push_back(std::move(pair));
    return ParallelCorpus(std::move(source), std::move(target), std::move(pairs));
}

inline std::string serialize_alignment(const std::vector<AlignmentPair>& pairs) {
    std::string out;
    for (const auto& pair : pairs) {
        for (const auto& ref : pair.source_refs) {
            out += std::to_string(pair.group_id) + "\tS\t" + ref.document_id + '\t' +
                   std::to_string(ref.sentence_index) + '\n';
        }
        for (const auto& ref : pair.target_refs) {
            out += std::to_string(pair.group_id) + "\tT\t" + ref.document_id + '\t' +
                   std::to_string(ref.sentence_index) + '\n';
        }
    }
    return out;
}

inline std::string serialize_alignment(const ParallelCorpus& pc) {
    return serialize_alignment(pc.pairs());
}

/// Target sentences aligned with a source sentence; empty for an omission.
inline std::vector<SentenceRef> aligned_targets(const ParallelCorpus& pc, const SentenceRef& source) {
    const AlignmentPair* pair = pc.pair_of_source(source);
    if (pair == nullptr) {
        throw Error(ErrorCode::DanglingReference, "sentence " + std::to_string(source.sentence_index) + " of '" +
                                                      source.document_id + "' is not in the source corpus");
    }
    return pair->target_refs;
}

namespace gale_church {

// Length ratio model: mean 1 target word per source word, variance 6.8.
constexpr double mean_ratio = 1.0;
constexpr double variance_per_unit = 6.8;

// -100 * ln(P(move) / P(1:1)) with P = .89 (1:1), .089 (2:1, 1:2),
// .011 (2:2), .0099 (1:0, 0:1).
constexpr double penalty_expand = 230.0;
constexpr double penalty_merge = 440.0;
constexpr double penalty_indel = 450.0;

/// Cost -100 ln P(|delta| >= observed) of pairing text of these lengths.
inline double match_cost(double source_len, double target_len) {
    if (source_len == 0.0 && target_len == 0.0) return 0.0;
    const double mean = (source_len + target_len / mean_ratio) / 2.0;
    const double z = std::abs((mean_ratio * source_len - target_len) / std::sqrt(variance_per_unit * mean));
    const double pd = std::max(2.0 * dist::normal_sf(z), std::numeric_limits<double>::min());
    return -100.0 * std::log(pd);
}

struct Move {
    std::size_t source;
    std::size_t target;
    double penalty;
};

// Listed in tie-break order: the earliest cheapest move wins.
inline constexpr std::array<Move, 6> moves{{
    {1, 1, 0.0},
    {1, 0, penalty_indel},
    {0, 1, penalty_indel},
    {2, 1, penalty_expand},
    {1, 2, penalty_expand},
    {2, 2, penalty_merge},
}};

inline double move_cost(const Move& m, std::span<const double> src, std::span<const double> tgt) {
    double s = 0.0;
    double t = 0.0;
    for (double v : src) s += v;
    for (double v : tgt) t += v;
    return match_cost(s, t) + m.penalty;
}

} // namespace gale_church

/// Length-based dynamic-programming sentence alignment of one document pair;
/// lengths are word-token counts. Group ids start at `first_group_id`.
inline std::vector<AlignmentPair> gale_church_align(const Document& source_doc, const Document& target_doc,
                                                    std::size_t first_group_id = 0) {
    if (source_doc.sentences.empty() || target_doc.sentences.empty()) {
        throw Error(ErrorCode::EmptyDocument, "cannot align an empty document");
    }
    const auto lengths = [](const Document& doc) {
        std::vector<double> out;
        for (const auto& s : doc.sentences) {
            out.push_back(static_cast<double>(
                std::count_if(s.begin(), s.end(), [](const Token& t) { return t.is_word(); })));
        }
        return out;
    };
    const std::vector<double> x = lengths(source_doc);
    const std::vector<double> y = lengths(target_doc);
    const std::size_t n = x.size();
    const std::size_t m = y.size();
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> cost(n + 1, std::vector<double>(m + 1, inf));
    std::vector<std::vector<int>> back(n + 1, std::vector<int>(m + 1, -1));
    cost[0][0] = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        for (std::size_t j = 0; j <= m; ++j) {
            if (i == 0 && j == 0) continue;
            for (std::size_t k = 0; k < gale_church::moves.size(); ++k) {
                const auto& mv = gale_church::moves[k];
                if (mv.source > i || mv.target > j) continue;
                const double prev = cost[i - mv.source][j - mv.target];
                if (prev == inf) continue;
                const double c = prev + gale_church::move_cost(
                                            mv, std::span<const double>(x).subspan(i - mv.source, mv.source),
                                            std::span<const double>(y).subspan(j - mv.target, mv.target));
                if (c < cost[i][j]) {
                    cost[i][j] = c;
                    back[i][j] = static_cast<int>(k);
                }
            }
        }
    }
    std::vector<AlignmentPair> reversed;
    std::size_t i = n;
    std::size_t j = m;
    while (i > 0 || j > 0) {
        const auto& mv = gale_church::moves[static_cast<std::size_t>(back[i][j])];
        AlignmentPair pair;
        for (std::size_t k = i - mv.source; k < i; ++k) pair.source_refs.push_back({source_doc.id, k});
        for (std::size_t k = j - mv.target; k < j; ++k) pair.target_refs.push_back({target_doc.id, k});
        reversed.push_back(std::move(pair));
        i -= mv.source;
        j -= mv.target;
    }
    std::vector<AlignmentPair> pairs(reversed.rbegin(), reversed.rend());
    for (std::size_t g = 0; g < pairs.size(); ++g) pairs[g].group_id = first_group_id + g;
    return pairs;
}

/// Aligns documents pairwise in corpus order.
inline ParallelCorpus align_corpora(Corpus source, Corpus target) {
    if (source.documents().size() != target.documents().size()) {
        throw Error(ErrorCode::InvalidArgument, "source has " + std::to_string(source.documents().size()) +
                                                    " documents, target has " +
                                                    std::to_string(target.documents().size()));
    }
    std::vector<AlignmentPair> pairs;
    for (std::size_t d = 0; d < source.documents().size(); ++d) {
        auto doc_pairs = gale_church_align(source.documents()[d], target.documents()[d], pairs.size());
        pairs.insert(pairs.end(), std::make_move_iterator(doc_pairs.begin()),
                     std::make_move_iterator(doc_pairs.end()));
    }
    return ParallelCorpus(std::move(source), std::move(target), std::move(pairs));
}

} // namespace corpusshift
