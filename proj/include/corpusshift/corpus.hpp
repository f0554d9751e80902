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

// Corpus model: documents made of sentence-segmented tokens.
//
// Tokenization rules:
//  - a token is a maximal run of letters, ideographs or digits; apostrophes and
//    hyphens are kept when they sit between two such characters ("don't",
//    "self-translation"); '.' and ',' are kept between two digits ("3.5");
//  - a run holding at least one letter or ideograph is a word, otherwise a
//    numeral; every other non-space character is a one-character punctuation
//    token;
//  - a sentence ends after . ! ? 。 ！ ？ (together with any directly following
//    terminators and closing quotes/brackets) or at a blank line;
//  - sentences without a word token are discarded, so every kept sentence
//    contributes to the word count.
//
// Text in scripts written without spaces must already be segmented.

#include "corpusshift/error.hpp"
#include "corpusshift/io.hpp"
#include "corpusshift/unicode.hpp"

#include <algorithm>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace corpusshift {

enum class TokenKind { word, numeral, punctuation };

struct Token {
    std::string surface;
    std::string normalized; ///< case-folded surface, used for matching
    TokenKind kind = TokenKind::word;
    std::size_t sentence_index = 0;
    std::size_t position_in_sentence = 0;

    bool is_word() const noexcept { return kind == TokenKind::word; }
    friend bool operator==(const Token&, const Token&) = default;
};

using Sentence = std::vector<Token>;

struct Document {
    std::string id;
    std::string label;
    std::string language;
    std::vector<Sentence> sentences;

    std::size_t word_count() const {
        std::size_t n = 0;
        for (const auto& sentence : sentences) {
            n += static_cast<std::size_t>(std::count_if(
                sentence.begin(), sentence.end(), [](const Token& t) { return t.is_word(); }));
        }
        return n;
    }

    friend bool operator==(const Document&, const Document&) = default;
};

/// Ordered documents sharing one language tag, with unique ids.
class Corpus {
public:
    Corpus() = default;
    Corpus(std::string id, std::string language)
        : id_(std::move(id)), language_(std::move(language)) {}

    const std::string& id() const noexcept { return id_; }
    const std::string& language() const noexcept { return language_; }
    const std::vector<Document>& documents() const noexcept { return documents_; }
    bool empty() const noexcept { return documents_.empty(); }

    void add(Document doc) {
        if (doc.language != language_) {
            throw Error(ErrorCode::LanguageMismatch,
                        "document '" + doc.id + "' is tagged '" + doc.language +
                            "' but corpus '" + id_ + "' is '" + language_ + "'");
        }
        if (index_.count(doc.id) != 0) {
            throw Error(ErrorCode::InvalidArgument, "duplicate document id '" + doc.id + "'");
        }
        index_.emplace(doc.id, documents_.size());
        documents_.push_back(std::move(doc));
    }

    const Document* find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? nullptr : &documents_[it->second];
    }

    /// Position of a document in corpus order, or npos.
    std::size_t index_of(std::string_view id) const {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? npos : it->second;
    }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::string id_;
    std::string language_;
    std::vector<Document> documents_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct DocumentStats {
    std::string document_id;
    std::size_t word_tokens = 0;
    std::size_t word_types = 0;
};

struct CorpusStats {
    std::size_t word_tokens = 0;
    std::size_t word_types = 0;
    std::vector<DocumentStats> per_document;
};

namespace detail {

inline bool is_sentence_terminator(char32_t cp) {
    switch (cp) {
    case U'.': case U'!': case U'?':
    case U'。': case U'！': case U'？':
        return true;
    default:
        return false;
    }
}

inline bool is_closer(char32_t cp) {
    switch (cp) {
    case U'"': case U'\'': case U'”': case U'’': case U')': case U']':
    case U'）': case U'」': case U'』': case U'»': case U'】': case U'〕':
        return true;
    default:
        return false;
    }
}

inline bool is_run_char(char32_t cp) {
    return unicode::is_letter(cp) || unicode::is_digit(cp);
}

class SentenceBuilder {
public:
    explicit SentenceBuilder(std::vector<Sentence>& out) : out_(out) {}

    void push(std::string surface, TokenKind kind) {
        Token token;
        token.normalized = kind == TokenKind::punctuation ? surface : unicode::fold_case(surface);
        token.surface = std::move(surface);
        token.kind = kind;
        has_word_ = has_word_ || kind == TokenKind::word;
        current_.push_back(std::move(token));
    }

    void close() {
        if (has_word_) {
            const std::size_t index = out_.size();
            for (std::size_t i = 0; i < current_.size(); ++i) {
                current_[i].sentence_index = index;
                current_[i].position_in_sentence = i;
            }
            out_.push_back(std::move(current_));
        }
        current_.clear();
        has_word_ = false;
    }

    bool empty() const noexcept { return current_.empty(); }

private:
    std::vector<Sentence>& out_;
    Sentence current_;
    bool has_word_ = false;
};

} // namespace detail

/// Tokenizes and sentence-splits one plain-text document.
/// Throws InvalidEncoding for malformed UTF-8 and EmptyInput when no word
/// token results.
inline Document ingest_document(std::string_view raw, std::string_view language,
                                std::string_view label, std::string_view id = {}) {
    const std::u32string text = unicode::decode_utf8(raw);
    Document doc;
    doc.id = std::string(id.empty() ? label : id);
    doc.label = std::string(label);
    doc.language = std::string(language);

    detail::SentenceBuilder builder(doc.sentences);
    bool after_terminator = false;
    std::size_t newlines = 0;
    const std::size_t n = text.size();
    std::size_t i = 0;
    while (i < n) {
        const char32_t c = text[i];
        if (unicode::is_space(c)) {
            if (c == U'\n') ++newlines;
            if (c == U'\u2029') newlines += 2; // paragraph separator
            ++i;
            continue;
        }
        if (newlines >= 2) {
            builder.close();
            after_terminator = false;
        }
        newlines = 0;

        if (detail::is_run_char(c)) {
            std::size_t j = i;
            bool has_letter = false;
            while (j < n) {
                const char32_t d = text[j];
                if (detail::is_run_char(d) || (j > i && unicode::is_mark(d))) {
                    has_letter = has_letter || unicode::is_letter(d);
                    ++j;
                    continue;
                }
                const bool next_is_run = j + 1 < n && detail::is_run_char(text[j + 1]);
                if (next_is_run && unicode::is_word_joiner(d)) {
                    ++j;
                    continue;
                }
                if (next_is_run && (d == U'.' || d == U',') && unicode::is_digit(text[j - 1]) &&
                    unicode::is_digit(text[j + 1])) {
                    ++j;
                    continue;
                }
                break;
            }
            if (after_terminator) {
                builder.close();
                after_terminator = false;
            }
            builder.push(unicode::encode_utf8(text.substr(i, j - i)),
                         has_letter ? TokenKind::word : TokenKind::numeral);
            i = j;
            continue;
        }

        // Single-character punctuation (or a stray combining mark).
        const bool terminator = detail::is_sentence_terminator(c);
        if (after_terminator && !terminator && !detail::is_closer(c)) {
            builder.close();
            after_terminator = false;
        }
        std::string surface;
        unicode::append_utf8(surface, c);
        builder.push(std::move(surface), TokenKind::punctuation);
        after_terminator = after_terminator || terminator;
        ++i;
    }
    builder.close();

    if (doc.sentences.empty()) {
        throw Error(ErrorCode::EmptyInput, "document '" + doc.id + "' contains no word tokens");
    }
    return doc;
}

/// Renders a document as whitespace-separated tokens, one blank line between
/// sentences. Re-ingesting the result reproduces the document.
inline std::string to_token_text(const Document& doc) {
    std::string out;
    for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
        if (s > 0) out += "\n\n";
        const auto& sentence = doc.sentences[s];
        for (std::size_t t = 0; t < sentence.size(); ++t) {
            if (t > 0) out += ' ';
            out += sentence[t].surface;
        }
    }
    out += '\n';
    return out;
}

inline std::vector<std::string> sentence_surfaces(const Sentence& sentence) {
    std::vector<std::string> out;
    out.reserve(sentence.size());
    for (const auto& t : sentence) out.push_back(t.surface);
    return out;
}

inline CorpusStats corpus_stats(const Corpus& corpus) {
    CorpusStats stats;
    std::unordered_set<std::string> corpus_types;
    for (const auto& doc : corpus.documents()) {
        std::unordered_set<std::string> doc_types;
        DocumentStats ds;
        ds.document_id = doc.id;
        for (const auto& sentence : doc.sentences) {
            for (const auto& token : sentence) {
                if (!token.is_word()) continue;
                ++ds.word_tokens;
                doc_types.insert(token.normalized);
                corpus_types.insert(token.normalized);
            }
        }
        ds.word_types = doc_types.size();
        stats.word_tokens += ds.word_tokens;
        stats.per_document.push_back(std::move(ds));
    }
    stats.word_types = corpus_types.size();
    return stats;
}

/// CSV with columns doc_id, word_tokens, word_types.
inline void write_stats_csv(std::ostream& out, const CorpusStats& stats) {
    out << "doc_id,word_tokens,word_types\n";
    for (const auto& ds : stats.per_document) {
        out << io::csv_field(ds.document_id) << ',' << ds.word_tokens << ',' << ds.word_types << '\n';
    }
}

/// Loads documents listed in a manifest of `document_id<TAB>label<TAB>path`
/// rows. Relative paths resolve against the manifest's directory; blank and
/// '#' lines are skipped.
inline Corpus load_corpus(const std::filesystem::path& manifest, const std::string& language,
                          std::string corpus_id = {}) {
    if (corpus_id.empty()) corpus_id = manifest.stem().string();
    const std::string text = io::read_file(manifest);
    Corpus corpus(std::move(corpus_id), language);
    const auto lines = io::split_lines(text);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string_view line = lines[ln];
        if (io::trim(line).empty() || line.front() == '#') continue;
        const auto fields = io::split(line, '\t');
        if (fields.size() != 3 || fields[0].empty() || fields[2].empty()) {
            throw Error(ErrorCode::FormatError,
                        "expected document_id<TAB>label<TAB>path", ln + 1)
                .with_source(manifest.string());
        }
        std::filesystem::path path{std::string(fields[2])};
        if (path.is_relative()) path = manifest.parent_path() / path;
        try {
            corpus.add(ingest_document(io::read_file(path), language, fields[1], fields[0]));
        } catch (const Error& e) {
            throw e.with_source(path.string());
        }
    }
    if (corpus.empty()) {
        throw Error(ErrorCode::EmptyInput, "manifest lists no documents").with_source(manifest.string());
    }
    return corpus;
}

} // namespace corpusshift
