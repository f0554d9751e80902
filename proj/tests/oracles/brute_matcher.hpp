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

// Test every pattern, then apply precedence: exact entry first, otherwise
// the longest matching prefix stem.

#include "corpusshift/dictionary.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace oracle {

inline std::vector<corpusshift::CategoryId> brute_match(const std::vector<corpusshift::Pattern>& patterns,
                                                        std::string_view token) {
    for (const auto& p : patterns) {
        if (!p.wildcard && p.stem == token) return p.category_ids;
    }
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        const auto& p = patterns[i];
        if (!p.wildcard || p.stem.size() > token.size()) continue;
        if (token.substr(0, p.stem.size()) != p.stem) continue;
        if (!best || p.stem.size() > patterns[*best].stem.size()) best = i;
    }
    if (!best) return {};
    return patterns[*best].category_ids;
}

} // namespace oracle
