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

#include <gtest/gtest.h>

#include <filesystem>
#include <initializer_list>
#include <string>
#include <utility>

namespace testing_support {

inline std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(FIXTURES_DIR) / rel; }

inline corpusshift::Corpus corpus_of(std::initializer_list<std::pair<std::string, std::string>> docs,
                                     const std::string& language = "en", const std::string& id = "test") {
    corpusshift::Corpus c(id, language);
    for (const auto& [doc_id, text] : docs) c.add(corpusshift::ingest_document(text, language, doc_id, doc_id));
    return c;
}

// Anger under negemo under affect, plus one unrelated category.
inline corpusshift::Dictionary anger_dict(const std::string& language = "en") {
    const auto base = corpusshift::parse_dic("%\n30\taffect\n32\tnegemo\n34\tanger\n111\taffiliation\n%\n"
                                             "war\t34\nwars\t34\nfight*\t34\nkill*\t34\nbitter*\t34\n"
                                             "contempt*\t34\nfriend*\t111\nfamily\t111\n",
                                             language);
    return corpusshift::load_hierarchy(base, "34\t32\n32\t30\n");
}

} // namespace testing_support

#define EXPECT_CS_ERROR(statement, expected_code)                                         \
    do {                                                                                  \
        try {                                                                             \
            statement;                                                                    \
            ADD_FAILURE() << "expected " << corpusshift::error_code_name(expected_code);  \
        } catch (const corpusshift::Error& e) {                                           \
            EXPECT_EQ(e.code(), expected_code) << e.what();                               \
        }                                                                                 \
    } while (0)
