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

// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "corpusshift/corpus.hpp"
#include "corpusshift/dictionary.hpp"
#include "corpusshift/distributions.hpp"
#include "corpusshift/frequency.hpp"
#include "corpusshift/io.hpp"
#include "corpusshift/ngram.hpp"
#include "corpusshift/shift.hpp"
#include "corpusshift/stats.hpp"

#include "oracles/brute_matcher.hpp"
#include "oracles/mwu_enumeration.hpp"
#include "oracles/naive_ngrams.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace cs = corpusshift;

namespace {

std::filesystem::path fixture(const std::string& rel) { return std::filesystem::path(FIXTURES_DIR) / rel; }

cs::Sample table_sample(const std::string& rel) {
    cs::Sample s;
    s.label = rel;
    for (const auto& r : cs::parse_frequency_table(cs::io::read_file(fixture(rel)))) s.values.push_back(r.frequency);
    return s;
}

bool near(double got, double want, double tol) { return std::abs(got - want) <= tol; }

struct Gate {
    int failures = 0;

    void report(int number, const std::string& name, const std::function<std::string()>& check) {
        std::string detail;
        try {
            detail = check();
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        const bool pass = detail.empty();
        if (!pass) ++failures;
        std::printf("%s %d %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(), pass ? "" : " -- ",
                    detail.c_str());
    }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string criterion_describe() {
    const auto start = std::chrono::steady_clock::now();
    const auto a = cs::describe(table_sample("tableA_anger.csv"));
    const auto b = cs::describe(table_sample("tableB_anger.csv"));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::string err;
    auto check = [&](const char* what, double got, double want) {
        if (!near(got, want, 1e-4)) err += std::string(what) + "=" + fmt(got) + " want " + fmt(want) + "; ";
    };
    check("A.mean", a.mean, 1.1036);
    check("A.sd", a.sd, 0.3861);
    check("A.median", a.median, 0.98);
    check("A.iqr", a.iqr, 0.78);
    check("B.mean", b.mean, 0.7755);
    check("B.sd", b.sd, 0.2775);
    check("B.median", b.median, 0.86);
    check("B.iqr", b.iqr, 0.56);
    if (elapsed >= 1.0) err += "runtime " + fmt(elapsed) + " s; ";
    return err;
}

std::string criterion_student_t() {
    const auto r = cs::two_sample_t(table_sample("tableA_anger.csv"), table_sample("tableB_anger.csv"),
                                    cs::TVariant::student);
    std::string err;
    if (!near(r.statistic, 2.2892, 5e-4)) err += "t=" + fmt(r.statistic) + "; ";
    if (!r.df || *r.df != 20.0) err += "df=" + (r.df ? fmt(*r.df) : std::string("none")) + "; ";
    if (!near(r.p_value, 0.0331, 5e-4)) err += "p=" + fmt(r.p_value) + "; ";
    return err;
}

std::string criterion_table_five() {
    const auto c = table_sample("tableC_anger.csv");
    const auto d = table_sample("tableD_anger.csv");
    std::string err;
    const double mc = cs::round_half_away(cs::describe(c).mean, 2);
    const double md = cs::round_half_away(cs::describe(d).mean, 2);
    if (mc != 1.13) err += "mean C=" + fmt(mc) + "; ";
    if (md != 0.85) err += "mean D=" + fmt(md) + "; ";
    const auto cmp = cs::compare_samples(c, d);
    const auto& r = cmp.result;
    if (r.method != cs::TestMethod::student_t) err += "method " + std::string(cs::method_name(r.method)) + "; ";
    if (!near(r.statistic, 1.88, 0.01)) err += "t=" + fmt(r.statistic) + "; ";
    if (!near(r.p_value, 0.07, 0.005)) err += "p=" + fmt(r.p_value) + "; ";
    if (r.significant || r.alpha != 0.05) err += "reported significant; ";
    return err;
}

std::string criterion_chapter_diff() {
    const auto diff = cs::chapter_diff(cs::parse_frequency_table(cs::io::read_file(fixture("tableA_anger.csv"))),
                                       cs::parse_frequency_table(cs::io::read_file(fixture("tableB_anger.csv"))), 0);
    std::string err;
    const auto it = std::find_if(diff.deltas.begin(), diff.deltas.end(),
                                 [](const cs::ChapterDelta& d) { return d.label == "10"; });
    if (it == diff.deltas.end()) return "no chapter 10";
    if (it->delta != 0.67) err += "delta=" + fmt(it->delta) + "; ";
    if (diff.maximal().label != "10") err += "maximal is " + diff.maximal().label + "; ";
    return err;
}

std::string criterion_t_distribution() {
    const double p = cs::dist::student_t_two_tailed(2.086, 20);
    return near(p, 0.05, 5e-4) ? "" : "p=" + fmt(p);
}

std::string criterion_mann_whitney() {
    std::string err;
    const auto small = cs::mann_whitney_u({{1, 2, 3}, "a"}, {{4, 5, 6}, "b"});
    if (!near(small.p_value, 0.1, 1e-12)) err += "p([1,2,3],[4,5,6])=" + fmt(small.p_value) + "; ";
    const double enumerated = oracle::mwu_enumerated_p(small.statistic, 3, 3);
    if (!near(enumerated, 0.1, 1e-12)) err += "oracle p=" + fmt(enumerated) + "; ";

    std::mt19937_64 rng(6);
    double worst = 0.0;
    for (int round = 0; round < 100; ++round) {
        // Tie-free: a random split of 20 distinct values.
        std::vector<double> pool(20);
        std::iota(pool.begin(), pool.end(), 1.0);
        for (auto& v : pool) v = v * 0.37 + std::uniform_real_distribution<double>(0.0, 0.3)(rng);
        std::shuffle(pool.begin(), pool.end(), rng);
        const cs::Sample a{{pool.begin(), pool.begin() + 10}, "a"};
        const cs::Sample b{{pool.begin() + 10, pool.end()}, "b"};
        const double u1 = cs::mann_whitney_u1(a, b);
        const double u = std::min(u1, 100.0 - u1);
        const auto exact = cs::mann_whitney_u(a, b);
        const double approx = cs::mann_whitney_normal_p(u, 10, 10, 0.0);
        worst = std::max(worst, std::abs(exact.p_value - approx));
        if (round < 5 && !near(exact.p_value, oracle::mwu_enumerated_p(u, 10, 10), 1e-12)) {
            err += "exact p disagrees with enumeration at round " + std::to_string(round) + "; ";
        }
    }
    if (worst > 0.01) err += "max |exact - approx| = " + fmt(worst) + "; ";
    return err;
}

std::string random_word(std::mt19937_64& rng, const std::vector<std::string>& alphabet) {
    std::string w = alphabet[rng() % alphabet.size()];
    if (rng() % 5 == 0) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

std::string criterion_ngram_oracle() {
    std::mt19937_64 rng(7);
    for (int seed = 0; seed < 100; ++seed) {
        const std::size_t alphabet_size = 1 + rng() % 20;
        std::vector<std::string> alphabet;
        for (std::size_t i = 0; i < alphabet_size; ++i) {
            alphabet.push_back(std::string(1, static_cast<char>('a' + i)) + "o");
        }
        cs::Corpus corpus("rand", "en");
        const std::size_t docs = 1 + rng() % 3;
        const std::size_t budget = 1 + rng() % 500;
        std::size_t used = 0;
        for (std::size_t d = 0; d < docs; ++d) {
            std::string text;
            const std::size_t share = (d + 1 == docs) ? budget - used : budget / docs;
            for (std::size_t t = 0; t < share; ++t, ++used) {
                const auto roll = rng() % 10;
                if (roll == 0) text += ". ";
                else if (roll == 1) text += ", ";
                else if (roll == 2 && rng() % 4 == 0) text += "42 ";
                else text += random_word(rng, alphabet) + " ";
            }
            text += "zo .";
            corpus.add(cs::ingest_document(text, "en", "d" + std::to_string(d), std::to_string(d)));
        }
        const std::size_t n_min = 1 + rng() % 3;
        const std::size_t n_max = n_min + rng() % 5;
        const std::size_t min_freq = 1 + rng() % 3;
        const bool cross = rng() % 3 == 0;
        const bool fold = rng() % 4 != 0;
        const cs::NGramSpec spec(n_min, n_max, min_freq, cross, fold);
        const auto got = cs::extract_ngrams(corpus, spec);
        const auto want = oracle::naive_ngrams(corpus, n_min, n_max, min_freq, cross, fold);
        const std::string where = "seed " + std::to_string(seed) + ": ";
        if (got.entries.size() != want.size()) {
            return where + "types " + std::to_string(got.entries.size()) + " vs " + std::to_string(want.size());
        }
        for (std::size_t i = 0; i < want.size(); ++i) {
            const auto& g = got.entries[i];
            const auto& w = want[i];
            if (g.tokens != w.tokens) return where + "tokens differ at entry " + std::to_string(i);
            if (g.freq != w.occurrences.size()) return where + "freq differs for " + g.text();
            for (std::size_t k = 0; k < w.occurrences.size(); ++k) {
                const auto& go = g.occurrences[k];
                const auto& wo = w.occurrences[k];
                if (go.document_id != wo.doc || go.sentence_index != wo.sentence || go.start_position != wo.position) {
                    return where + "positions differ for " + g.text();
                }
            }
        }
        // Sub-gram monotonicity, checked on an unfiltered within-sentence run.
        const cs::NGramSpec mono(n_min, n_max, 1, false, fold);
        const auto all = cs::extract_ngrams(corpus, mono);
        std::map<std::vector<std::string>, std::size_t> freq;
        for (const auto& e : all.entries) freq[e.tokens] = e.freq;
        for (const auto& e : all.entries) {
            for (std::size_t len = n_min; len < e.length(); ++len) {
                for (std::size_t s = 0; s + len <= e.length(); ++s) {
                    const std::vector<std::string> sub(e.tokens.begin() + s, e.tokens.begin() + s + len);
                    const auto it = freq.find(sub);
                    if (it == freq.end() || it->second < e.freq) return where + "sub-gram of " + e.text();
                }
            }
        }
    }
    return "";
}

std::string criterion_matcher_oracle() {
    std::mt19937_64 rng(8);
    const std::string letters = "abcdef";
    auto random_string = [&](std::size_t max_len) {
        std::string s;
        const std::size_t len = 1 + rng() % max_len;
        for (std::size_t i = 0; i < len; ++i) s += letters[rng() % letters.size()];
        return s;
    };
    for (int seed = 0; seed < 100; ++seed) {
        std::vector<cs::Category> cats;
        const int n_cats = 1 + static_cast<int>(rng() % 12);
        for (int c = 1; c <= n_cats; ++c) cats.push_back({c, "c" + std::to_string(c), std::nullopt});
        std::vector<cs::Pattern> patterns;
        std::set<std::pair<std::string, bool>> seen;
        const std::size_t target = 1 + rng() % 500;
        for (std::size_t attempt = 0; patterns.size() < target && attempt < 20 * target; ++attempt) {
            const std::string stem = random_string(6);
            const bool wildcard = rng() % 2 == 0;
            if (!seen.emplace(stem, wildcard).second) continue;
            std::vector<cs::CategoryId> ids;
            const int k = 1 + static_cast<int>(rng() % 3);
            for (int i = 0; i < k; ++i) ids.push_back(1 + static_cast<int>(rng() % n_cats));
            std::sort(ids.begin(), ids.end());
            ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
            patterns.push_back({stem, wildcard, ids});
        }
        const cs::Dictionary dict("en", cats, patterns);
        for (int t = 0; t < 1000; ++t) {
            const std::string token = random_string(8);
            const auto span = cs::match_token(dict, token);
            const std::vector<cs::CategoryId> got(span.begin(), span.end());
            if (got != oracle::brute_match(dict.patterns(), token)) {
                return "seed " + std::to_string(seed) + " token " + token;
            }
        }
    }
    return "";
}

std::string criterion_shift_pipeline() {
    auto load_dict = [](const std::string& lang) {
        return cs::load_hierarchy(cs::parse_dic(cs::io::read_file(fixture("dict/" + lang + ".dic")), lang),
                                  cs::io::read_file(fixture("dict/hierarchy.tsv")));
    };
    const auto pc = cs::load_alignment(cs::load_corpus(fixture("synthetic/en.tsv"), "en"),
                                       cs::load_corpus(fixture("synthetic/zh.tsv"), "zh"),
                                       cs::io::read_file(fixture("synthetic/alignment.tsv")));
    const auto en = load_dict("en");
    const auto zh = load_dict("zh");
    const auto anger = en.require_category("anger").id;
    const auto report = cs::build_shift_report(pc, en, zh, anger, zh.require_category("anger").id);
    std::ostringstream out;
    cs::render_markdown(out, report);
    std::string err;
    if (out.str() != cs::io::read_file(fixture("golden/shift_report.md"))) err += "report differs from golden; ";
    for (auto c : {cs::ShiftClass::dropped, cs::ShiftClass::added, cs::ShiftClass::unaligned}) {
        if (report.total(c) != 1) {
            err += std::string(cs::shift_class_name(c)) + "=" + std::to_string(report.total(c)) + "; ";
        }
    }
    return err;
}

} // namespace

int main() {
    Gate gate;
    gate.report(1, "describe() on the anger tables", criterion_describe);
    gate.report(2, "Student t on the anger tables", criterion_student_t);
    gate.report(3, "routed comparison on the second anger tables", criterion_table_five);
    gate.report(4, "chapter difference maximum", criterion_chapter_diff);
    gate.report(5, "t distribution two-tailed p", criterion_t_distribution);
    gate.report(6, "Mann-Whitney exact and approximate p", criterion_mann_whitney);
    gate.report(7, "n-gram oracle equivalence", criterion_ngram_oracle);
    gate.report(8, "matcher oracle equivalence", criterion_matcher_oracle);
    gate.report(9, "end-to-end shift report", criterion_shift_pipeline);
    std::printf("%s: %d of 9 criteria failed\n", gate.failures ? "FAIL" : "PASS", gate.failures);
    return gate.failures == 0 ? 0 : 1;
}
