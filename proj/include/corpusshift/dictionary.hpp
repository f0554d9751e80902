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

// Category dictionaries in the LIWC .dic layout:
//
//   %
//   <id><TAB><name>        one per category
//   %
//   <stem[*]><TAB><id>[<TAB><id>...]
//
// A trailing '*' turns the stem into a prefix pattern. A token is matched by
// exactly one entry: an exact entry beats every prefix entry, and among prefix
// entries the longest stem wins.
//
// The category hierarchy is read from a separate `<child_id><TAB><parent_id>`
// file; loading it closes every entry's category set over its ancestors.

#include "corpusshift/error.hpp"
#include "corpusshift/io.hpp"
#include "corpusshift/unicode.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace corpusshift {

using CategoryId = int;

struct Category {
    CategoryId id = 0;
    std::string name;
    std::optional<CategoryId> parent;

    friend bool operator==(const Category&, const Category&) = default;
};

struct Pattern {
    std::string stem; ///< case-folded, without the '*'
    bool wildcard = false;
    std::vector<CategoryId> category_ids; ///< sorted, unique

    bool matches(std::string_view normalized) const {
        return wildcard ? normalized.starts_with(stem) : normalized == stem;
    }

    friend bool operator==(const Pattern&, const Pattern&) = default;
};

/// Immutable category dictionary with a compiled byte trie.
class Dictionary {
public:
    static constexpr std::size_t max_depth = 3;

    Dictionary() { nodes_.emplace_back(); }

    /// Validates references, duplicate patterns and the category hierarchy,
    /// then compiles the matcher.
    Dictionary(std::string language, std::vector<Category> categories, std::vector<Pattern> patterns)
        : language_(std::move(language)), categories_(std::move(categories)),
          patterns_(std::move(patterns)) {
        for (std::size_t i = 0; i < categories_.size(); ++i) {
            if (!by_id_.emplace(categories_[i].id, i).second) {
                throw Error(ErrorCode::FormatError,
                            "duplicate category id " + std::to_string(categories_[i].id));
            }
        }
        for (const auto& c : categories_) {
            if (c.parent && by_id_.count(*c.parent) == 0) {
                throw Error(ErrorCode::UnknownCategory,
                            "parent " + std::to_string(*c.parent) + " of category " +
                                std::to_string(c.id) + " is not declared");
            }
        }
        check_hierarchy();
        std::set<std::pair<std::string, bool>> seen;
        for (auto& p : patterns_) {
            if (p.stem.empty()) throw Error(ErrorCode::FormatError, "empty pattern stem");
            if (!seen.emplace(p.stem, p.wildcard).second) {
                throw Error(ErrorCode::DuplicatePattern,
                            "pattern '" + p.stem + (p.wildcard ? "*" : "") + "' listed twice");
            }
            std::sort(p.category_ids.begin(), p.category_ids.end());
            p.category_ids.erase(std::unique(p.category_ids.begin(), p.category_ids.end()),
                                 p.category_ids.end());
            for (CategoryId id : p.category_ids) {
                if (by_id_.count(id) == 0) {
                    throw Error(ErrorCode::UnknownCategory,
                                "pattern '" + p.stem + "' cites undeclared category " +
                                    std::to_string(id));
                }
            }
        }
        compile();
    }

    const std::string& language() const noexcept { return language_; }
    const std::vector<Category>& categories() const noexcept { return categories_; }
    const std::vector<Pattern>& patterns() const noexcept { return patterns_; }

    const Category* find_category(CategoryId id) const {
        auto it = by_id_.find(id);
        return it == by_id_.end() ? nullptr : &categories_[it->second];
    }

    const Category* find_category(std::string_view name) const {
        for (const auto& c : categories_) {
            if (c.name == name) return &c;
        }
        return nullptr;
    }

    const Category& require_category(CategoryId id) const {
        const Category* c = find_category(id);
        if (c == nullptr) {
            throw Error(ErrorCode::UnknownCategory, "category " + std::to_string(id) + " is not declared");
        }
        return *c;
    }

    const Category& require_category(std::string_view name) const {
        const Category* c = find_category(name);
        if (c == nullptr) {
            throw Error(ErrorCode::UnknownCategory, "category '" + std::string(name) + "' is not declared");
        }
        return *c;
    }

    /// Parent chain of `id`, nearest first.
    std::vector<CategoryId> ancestors(CategoryId id) const {
        std::vector<CategoryId> out;
        const Category* c = find_category(id);
        while (c != nullptr && c->parent) {
            out.push_back(*c->parent);
            c = find_category(*c->parent);
        }
        return out;
    }

    bool is_ancestor(CategoryId ancestor, CategoryId id) const {
        const auto chain = ancestors(id);
        return std::find(chain.begin(), chain.end(), ancestor) != chain.end();
    }

    /// Index of the winning pattern for a normalized token, if any.
    std::optional<std::size_t> match_index(std::string_view normalized) const {
        std::uint32_t node = 0;
        std::int32_t best_wildcard = nodes_[0].wildcard;
        for (char ch : normalized) {
            node = child(node, static_cast<unsigned char>(ch));
            if (node == no_node) break;
            if (nodes_[node].wildcard >= 0) best_wildcard = nodes_[node].wildcard;
        }
        if (node != no_node && nodes_[node].literal >= 0) {
            return static_cast<std::size_t>(nodes_[node].literal);
        }
        if (best_wildcard >= 0) return static_cast<std::size_t>(best_wildcard);
        return std::nullopt;
    }

    /// Category set of the winning entry; empty when nothing matches.
    std::span<const CategoryId> match(std::string_view normalized) const {
        const auto idx = match_index(normalized);
        if (!idx) return {};
        return patterns_[*idx].category_ids;
    }

    bool matches_category(std::string_view normalized, CategoryId category) const {
        const auto ids = match(normalized);
        return std::binary_search(ids.begin(), ids.end(), category);
    }

private:
    static constexpr std::uint32_t no_node = 0xFFFFFFFFu;

    struct Node {
        std::vector<std::pair<unsigned char, std::uint32_t>> edges; // sorted by byte
        std::int32_t literal = -1;
        std::int32_t wildcard = -1;
    };

    std::uint32_t child(std::uint32_t node, unsigned char byte) const {
        const auto& edges = nodes_[node].edges;
        auto it = std::lower_bound(edges.begin(), edges.end(), byte,
                                   [](const auto& e, unsigned char b) { return e.first < b; });
        return it != edges.end() && it->first == byte ? it->second : no_node;
    }

    void compile() {
        nodes_.assign(1, Node{});
        for (std::size_t i = 0; i < patterns_.size(); ++i) {
            std::uint32_t node = 0;
            for (char ch : patterns_[i].stem) {
                const auto byte = static_cast<unsigned char>(ch);
                std::uint32_t next = child(node, byte);
                if (next == no_node) {
                    next = static_cast<std::uint32_t>(nodes_.size());
                    nodes_.emplace_back();
                    auto& edges = nodes_[node].edges;
                    auto it = std::lower_bound(edges.begin(), edges.end(), byte,
                                               [](const auto& e, unsigned char b) { return e.first < b; });
                    edges.insert(it, {byte, next});
                }
                node = next;
            }
            auto& slot = patterns_[i].wildcard ? nodes_[node].wildcard : nodes_[node].literal;
            slot = static_cast<std::int32_t>(i);
        }
    }

    void check_hierarchy() const {
        for (const auto& c : categories_) {
            std::size_t depth = 1;
            const Category* cur = &c;
            while (cur->parent) {
                if (*cur->parent == c.id || depth > categories_.size()) {
                    throw Error(ErrorCode::CycleDetected,
                                "category " + std::to_string(c.id) + " is its own ancestor");
                }
                cur = &categories_[by_id_.at(*cur->parent)];
                ++depth;
            }
            if (depth > max_depth) {
                throw Error(ErrorCode::FormatError,
                            "category " + std::to_string(c.id) + " sits " + std::to_string(depth) +
                                " levels deep; at most " + std::to_string(max_depth) + " are allowed");
            }
        }
    }

    std::string language_;
    std::vector<Category> categories_;
    std::vector<Pattern> patterns_;
    std::unordered_map<CategoryId, std::size_t> by_id_;
    std::vector<Node> nodes_;
};

/// Parses .dic text. Errors carry the 1-based line number.
inline Dictionary parse_dic(std::string_view source, std::string language) {
    const auto lines = io::split_lines(source);
    std::size_t ln = 0;
    // Skip a UTF-8 byte-order mark on the first line.
    const auto strip_bom = [](std::string_view s) {
        return s.starts_with("\xEF\xBB\xBF") ? s.substr(3) : s;
    };
    if (lines.empty() || io::trim(strip_bom(lines[0])) != "%") {
        throw Error(ErrorCode::FormatError, "first line must be '%'", 1);
    }
    try {
        (void)unicode::decode_utf8(source);
    } catch (const Error& e) {
        throw Error(ErrorCode::InvalidEncoding, "dictionary is not valid UTF-8", e.line());
    }

    std::vector<Category> categories;
    std::set<std::string> names;
    ln = 1;
    bool closed = false;
    for (; ln < lines.size(); ++ln) {
        const std::string_view line = lines[ln];
        if (io::trim(line) == "%") {
            closed = true;
            ++ln;
            break;
        }
        if (io::trim(line).empty()) continue;
        const auto fields = io::split(line, '\t');
        long long id = 0;
        if (fields.size() != 2 || !io::parse_int(fields[0], id) || io::trim(fields[1]).empty()) {
            throw Error(ErrorCode::FormatError, "expected <id><TAB><name>", ln + 1);
        }
        const std::string name(io::trim(fields[1]));
        for (const auto& c : categories) {
            if (c.id == id) {
                throw Error(ErrorCode::FormatError, "duplicate category id " + std::to_string(id), ln + 1);
            }
        }
        if (!names.insert(name).second) {
            throw Error(ErrorCode::FormatError, "duplicate category name '" + name + "'", ln + 1);
        }
        categories.push_back(Category{static_cast<CategoryId>(id), name, std::nullopt});
    }
    if (!closed) {
        throw Error(ErrorCode::FormatError, "category block is not closed by '%'", lines.size());
    }

    std::set<CategoryId> declared;
    for (const auto& c : categories) declared.insert(c.id);

    std::vector<Pattern> patterns;
    std::set<std::pair<std::string, bool>> seen;
    for (; ln < lines.size(); ++ln) {
        const std::string_view line = lines[ln];
        if (io::trim(line).empty()) continue;
        const auto fields = io::split(line, '\t');
        if (fields.size() < 2) {
            throw Error(ErrorCode::FormatError, "expected <stem><TAB><id>...", ln + 1);
        }
        std::string_view raw_stem = io::trim(fields[0]);
        Pattern p;
        if (raw_stem.ends_with('*')) {
            p.wildcard = true;
            raw_stem.remove_suffix(1);
        }
        if (raw_stem.empty() || raw_stem.find('*') != std::string_view::npos) {
            throw Error(ErrorCode::FormatError, "malformed stem '" + std::string(fields[0]) + "'", ln + 1);
        }
        p.stem = unicode::fold_case(raw_stem);
        for (std::size_t f = 1; f < fields.size(); ++f) {
            long long id = 0;
            if (!io::parse_int(fields[f], id)) {
                throw Error(ErrorCode::FormatError,
                            "category id '" + std::string(fields[f]) + "' is not an integer", ln + 1);
            }
            if (declared.count(static_cast<CategoryId>(id)) == 0) {
                throw Error(ErrorCode::UnknownCategory,
                            "entry cites undeclared category " + std::to_string(id), ln + 1);
            }
            p.category_ids.push_back(static_cast<CategoryId>(id));
        }
        if (!seen.emplace(p.stem, p.wildcard).second) {
            throw Error(ErrorCode::DuplicatePattern,
                        "pattern '" + std::string(fields[0]) + "' already defined", ln + 1);
        }
        patterns.push_back(std::move(p));
    }
    return Dictionary(std::move(language), std::move(categories), std::move(patterns));
}

/// Attaches `child<TAB>parent` links and closes every pattern's category set
/// over ancestors. An empty tree leaves the dictionary unchanged.
inline Dictionary load_hierarchy(const Dictionary& dict, std::string_view tree) {
    std::vector<Category> categories = dict.categories();
    std::unordered_map<CategoryId, std::size_t> index;
    for (std::size_t i = 0; i < categories.size(); ++i) index.emplace(categories[i].id, i);

    const auto lines = io::split_lines(tree);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
        const std::string_view line = io::trim(lines[ln]);
        if (line.empty() || line.front() == '#') continue;
        const auto fields = io::split(line, '\t');
        long long child = 0;
        long long parent = 0;
        if (fields.size() != 2 || !io::parse_int(fields[0], child) || !io::parse_int(fields[1], parent)) {
            throw Error(ErrorCode::FormatError, "expected <child_id><TAB><parent_id>", ln + 1);
        }
        const auto ci = index.find(static_cast<CategoryId>(child));
        const auto pi = index.find(static_cast<CategoryId>(parent));
        if (ci == index.end() || pi == index.end()) {
            throw Error(ErrorCode::UnknownCategory,
                        "category " + std::to_string(ci == index.end() ? child : parent) + " is not declared",
                        ln + 1);
        }
        if (child == parent) {
            throw Error(ErrorCode::CycleDetected, "category " + std::to_string(child) + " is its own parent", ln + 1);
        }
        auto& slot = categories[ci->second].parent;
        if (slot && *slot != parent) {
            throw Error(ErrorCode::FormatError,
                        "category " + std::to_string(child) + " already has parent " + std::to_string(*slot),
                        ln + 1);
        }
        slot = static_cast<CategoryId>(parent);
    }

    // Cycle check before the closure walks parent chains.
    for (const auto& c : categories) {
        std::set<CategoryId> visited{c.id};
        std::optional<CategoryId> cur = c.parent;
        while (cur) {
            if (!visited.insert(*cur).second) {
                throw Error(ErrorCode::CycleDetected,
                            "hierarchy cycle through category " + std::to_string(*cur));
            }
            cur = categories[index.at(*cur)].parent;
        }
    }

    std::vector<Pattern> patterns = dict.patterns();
    for (auto& p : patterns) {
        std::vector<CategoryId> closed = p.category_ids;
        for (CategoryId id : p.category_ids) {
            std::optional<CategoryId> cur = categories[index.at(id)].parent;
            while (cur) {
                closed.push_back(*cur);
                cur = categories[index.at(*cur)].parent;
            }
        }
        p.category_ids = std::move(closed);
    }
    return Dictionary(dict.language(), std::move(categories), std::move(patterns));
}

inline std::span<const CategoryId> match_token(const Dictionary& dict, std::string_view normalized) {
    return dict.match(normalized);
}

inline Dictionary load_dictionary(const std::filesystem::path& dic_path, const std::string& language,
                                  const std::filesystem::path& hierarchy_path = {}) {
    Dictionary dict;
    try {
        dict = parse_dic(io::read_file(dic_path), language);
    } catch (const Error& e) {
        throw e.with_source(dic_path.string());
    }
    if (!hierarchy_path.empty()) {
        try {
            dict = load_hierarchy(dict, io::read_file(hierarchy_path));
        } catch (const Error& e) {
            throw e.with_source(hierarchy_path.string());
        }
    }
    return dict;
}

} // namespace corpusshift
