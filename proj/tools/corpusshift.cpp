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

// corpusshift command-line front end.
//
// Exit status: 0 success, 1 data error, 2 usage error.

#include "corpusshift/align.hpp"
#include "corpusshift/corpus.hpp"
#include "corpusshift/dictionary.hpp"
#include "corpusshift/frequency.hpp"
#include "corpusshift/io.hpp"
#include "corpusshift/ngram.hpp"
#include "corpusshift/shift.hpp"
#include "corpusshift/stats.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace cs = corpusshift;
using nlohmann::ordered_json;

namespace {

struct Global {
    std::string out;
    std::string format;
    double alpha = 0.05;
    std::optional<unsigned long long> seed; // accepted for scripts; no subcommand draws random numbers
};

struct CorpusArgs {
    std::string manifest;
    std::string language;
};

struct DictArgs {
    std::string dic;
    std::string hierarchy;
};

struct SpecArgs {
    std::size_t n_min = 3;
    std::size_t n_max = 7;
    std::size_t min_freq = 3;
    bool cross_sentence = false;
    bool no_case_fold = false;

    cs::NGramSpec spec() const { return {n_min, n_max, min_freq, cross_sentence, !no_case_fold}; }
};

void add_corpus(CLI::App* app, CorpusArgs& a, const std::string& prefix = "", const std::string& what = "corpus") {
    const std::string corpus_flag = prefix.empty() ? "--manifest" : "--" + prefix;
    const std::string lang_flag = prefix.empty() ? "--lang" : "--" + prefix + "-lang";
    app->add_option(corpus_flag, a.manifest, what + " manifest (document_id<TAB>label<TAB>path)")
        ->required()
        ->check(CLI::ExistingFile);
    app->add_option(lang_flag, a.language, what + " language code")->required();
}

void add_dict(CLI::App* app, DictArgs& a, const std::string& prefix = "") {
    const std::string p = prefix.empty() ? "--" : "--" + prefix + "-";
    app->add_option(p + "dict", a.dic, "LIWC-style .dic file")->required()->check(CLI::ExistingFile);
    app->add_option(p + "hierarchy", a.hierarchy, "category hierarchy TSV (child<TAB>parent)")
        ->check(CLI::ExistingFile);
}

void add_spec(CLI::App* app, SpecArgs& a) {
    app->add_option("--n-min", a.n_min, "shortest n-gram")->capture_default_str();
    app->add_option("--n-max", a.n_max, "longest n-gram")->capture_default_str();
    app->add_option("--min-freq", a.min_freq, "minimum corpus frequency")->capture_default_str();
    app->add_flag("--cross-sentence", a.cross_sentence, "let windows run across sentence boundaries");
    app->add_flag("--no-case-fold", a.no_case_fold, "count surface forms instead of case-folded forms");
}

cs::Corpus load(const CorpusArgs& a) { return cs::load_corpus(a.manifest, a.language); }

cs::Dictionary load(const DictArgs& a, const std::string& language) {
    return cs::load_dictionary(a.dic, language, a.hierarchy);
}

// Resolves a category by name, or by numeric id.
cs::CategoryId category_of(const cs::Dictionary& dict, const std::string& name) {
    if (const auto* c = dict.find_category(name)) return c->id;
    long long id = 0;
    if (cs::io::parse_int(name, id)) return dict.require_category(static_cast<cs::CategoryId>(id)).id;
    return dict.require_category(name).id;
}

std::string format_or(const Global& g, const std::string& fallback, std::initializer_list<const char*> allowed) {
    const std::string f = g.format.empty() ? fallback : g.format;
    for (const char* a : allowed) {
        if (f == a) return f;
    }
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw CLI::ValidationError("--format", "'" + f + "' is not available here; use " + list);
}

double r4(double v) { return cs::round_half_away(v, 4); }

cs::Sample read_sample(const std::string& path) {
    try {
        const auto records = cs::parse_frequency_table(cs::io::read_file(path));
        cs::Sample s;
        s.label = std::filesystem::path(path).stem().string();
        for (const auto& r : records) s.values.push_back(r.frequency);
        return s;
    } catch (const cs::Error& e) {
        throw e.with_source(path);
    }
}

ordered_json describe_json(const cs::DescriptiveStats& d) {
    return {{"n", d.n}, {"mean", r4(d.mean)}, {"sd", r4(d.sd)}, {"median", r4(d.median)}, {"iqr", r4(d.iqr)}};
}

ordered_json test_json(const cs::TestResult& t) {
    ordered_json j;
    j["method"] = std::string(cs::method_name(t.method));
    j["statistic"] = r4(t.statistic);
    j["df"] = t.df ? ordered_json(r4(*t.df)) : ordered_json(nullptr);
    j["p_value"] = r4(t.p_value);
    j["alpha"] = t.alpha;
    j["significant"] = t.significant;
    return j;
}

void run_ingest(const Global& g, const CorpusArgs& c, const std::string& tokens_dir, std::ostream& out) {
    const auto corpus = load(c);
    format_or(g, "csv", {"csv"});
    if (!tokens_dir.empty()) {
        std::filesystem::create_directories(tokens_dir);
        for (const auto& doc : corpus.documents()) {
            const auto path = std::filesystem::path(tokens_dir) / (doc.id + ".tok");
            std::ofstream f(path, std::ios::binary);
            f << cs::to_token_text(doc) << '\n';
            if (!f) throw cs::Error(cs::ErrorCode::IoError, "cannot write '" + path.string() + "'");
        }
    }
    cs::write_stats_csv(out, cs::corpus_stats(corpus));
}

void run_stats(const Global& g, const std::vector<std::string>& inputs, std::ostream& out) {
    const std::string fmt = format_or(g, "csv", {"csv", "json"});
    ordered_json all = ordered_json::array();
    if (fmt == "csv") out << "sample,n,mean,sd,median,iqr\n";
    for (const auto& path : inputs) {
        const auto sample = read_sample(path);
        const auto d = cs::describe(sample);
        if (fmt == "csv") {
            out << cs::io::csv_field(sample.label) << ',' << d.n << ',' << cs::io::fixed(d.mean, 4) << ','
                << cs::io::fixed(d.sd, 4) << ',' << cs::io::fixed(d.median, 4) << ',' << cs::io::fixed(d.iqr, 4)
                << '\n';
        } else {
            auto j = describe_json(d);
            j["sample"] = sample.label;
            all.push_back(std::move(j));
        }
    }
    if (fmt == "json") out << all.dump(2) << '\n';
}

void run_compare(const Global& g, const std::string& left, const std::string& right, double normality_alpha,
                 double variance_alpha, std::ostream& out) {
    format_or(g, "json", {"json"});
    const auto a = read_sample(left);
    const auto b = read_sample(right);
    cs::ComparisonPlan plan;
    plan.normality_alpha = normality_alpha;
    plan.variance_alpha = variance_alpha;
    plan.test_alpha = g.alpha;
    const auto cmp = cs::compare_samples(a, b, plan);
    auto j = test_json(cmp.result);
    j["descriptives"] = {{"left", describe_json(cs::describe(a))}, {"right", describe_json(cs::describe(b))}};
    out << j.dump(2) << '\n';
}

void run_freq(const Global& g, const CorpusArgs& c, const DictArgs& d, const std::vector<std::string>& categories,
              std::ostream& out) {
    const std::string fmt = format_or(g, "csv", {"csv", "json"});
    const auto corpus = load(c);
    const auto dict = load(d, c.language);
    auto records = cs::category_frequencies(corpus, dict);
    if (!categories.empty()) {
        std::vector<cs::FrequencyRecord> kept;
        std::vector<cs::CategoryId> ids;
        for (const auto& name : categories) ids.push_back(category_of(dict, name));
        for (auto& r : records) {
            if (std::find(ids.begin(), ids.end(), r.category_id) != ids.end()) kept.push_back(std::move(r));
        }
        records = std::move(kept);
    }
    if (fmt == "csv") {
        cs::write_frequency_csv(out, records, dict);
        return;
    }
    ordered_json all = ordered_json::array();
    for (const auto& r : records) {
        all.push_back({{"doc_id", r.document_id},
                       {"category_name", dict.require_category(r.category_id).name},
                       {"hit_count", r.hit_count},
                       {"word_total", r.word_total},
                       {"frequency", r.displayed()}});
    }
    out << all.dump(2) << '\n';
}

void run_topwords(const Global& g, const CorpusArgs& c, const DictArgs& d, const std::string& category,
                  std::size_t k, std::ostream& out) {
    const std::string fmt = format_or(g, "csv", {"csv", "json"});
    const auto corpus = load(c);
    const auto dict = load(d, c.language);
    cs::require_language(corpus, dict);
    const auto id = category_of(dict, category);
    const auto ranked = cs::top_words(corpus, dict, id, k);
    const std::string& name = dict.require_category(id).name;
    if (fmt == "csv") {
        out << "category_name,rank,word,count\n";
        for (const auto& e : ranked) {
            out << cs::io::csv_field(name) << ',' << e.rank << ',' << cs::io::csv_field(e.word) << ',' << e.count
                << '\n';
        }
        return;
    }
    ordered_json all = ordered_json::array();
    for (const auto& e : ranked) {
        all.push_back({{"category_name", name}, {"rank", e.rank}, {"word", e.word}, {"count", e.count}});
    }
    out << all.dump(2) << '\n';
}

void run_ngrams(const Global& g, const CorpusArgs& c, const SpecArgs& s, const DictArgs& d,
                const std::string& category, std::ostream& out) {
    format_or(g, "csv", {"csv"});
    const auto spec = s.spec();
    const auto corpus = load(c);
    auto report = cs::extract_ngrams(corpus, spec);
    if (!category.empty()) {
        if (d.dic.empty()) throw CLI::ValidationError("--category", "needs --dict");
        const auto dict = load(d, c.language);
        cs::require_language(corpus, dict);
        report = cs::filter_by_category(report, dict, category_of(dict, category));
    }
    cs::write_ngram_csv(out, report);
}

void run_align(const Global& g, const CorpusArgs& src, const CorpusArgs& tgt, const std::string& check,
               std::ostream& out) {
    format_or(g, "csv", {"csv"});
    auto source = load(src);
    auto target = load(tgt);
    if (!check.empty()) {
        try {
            const auto pc = cs::load_alignment(std::move(source), std::move(target), cs::io::read_file(check));
            out << cs::serialize_alignment(pc);
        } catch (const cs::Error& e) {
            throw e.with_source(check);
        }
        return;
    }
    out << cs::serialize_alignment(cs::align_corpora(std::move(source), std::move(target)));
}

struct ShiftArgs {
    CorpusArgs src;
    CorpusArgs tgt;
    DictArgs src_dict;
    DictArgs tgt_dict;
    std::string align;
    std::string category;
    std::string tgt_category;
    std::size_t width = 5;
    SpecArgs spec;
};

void run_shift(const Global& g, const ShiftArgs& a, std::ostream& out) {
    const std::string fmt = format_or(g, "markdown", {"markdown", "json"});
    const auto spec = a.spec.spec();
    auto source = load(a.src);
    auto target = load(a.tgt);
    const auto src_dict = load(a.src_dict, a.src.language);
    const auto tgt_dict = load(a.tgt_dict, a.tgt.language);
    const auto src_cat = category_of(src_dict, a.category);
    const auto tgt_cat = category_of(tgt_dict, a.tgt_category.empty() ? src_dict.require_category(src_cat).name
                                                                      : a.tgt_category);
    std::optional<cs::ParallelCorpus> pc;
    try {
        pc.emplace(cs::load_alignment(std::move(source), std::move(target), cs::io::read_file(a.align)));
    } catch (const cs::Error& e) {
        throw e.with_source(a.align);
    }
    const auto report = cs::build_shift_report(*pc, src_dict, tgt_dict, src_cat, tgt_cat, spec, a.width);
    if (fmt == "markdown") {
        cs::render_markdown(out, report);
    } else {
        out << cs::to_json(report).dump(2) << '\n';
    }
}

void run_kwic(const Global& g, const CorpusArgs& c, const std::string& pattern, std::size_t width,
              std::ostream& out) {
    const std::string fmt = format_or(g, "csv", {"csv", "json", "markdown"});
    const auto corpus = load(c);
    std::vector<std::string> words;
    std::istringstream in(pattern);
    for (std::string w; in >> w;) words.push_back(w);
    const auto lines = cs::kwic(corpus, words, width);
    if (fmt == "csv") {
        out << "doc_id,sentence_index,start_position,left,node,right\n";
        for (const auto& k : lines) {
            out << cs::io::csv_field(k.document_id) << ',' << k.sentence_index << ',' << k.start_position << ','
                << cs::io::csv_field(cs::detail::join(k.left)) << ',' << cs::io::csv_field(cs::detail::join(k.node))
                << ',' << cs::io::csv_field(cs::detail::join(k.right)) << '\n';
        }
    } else if (fmt == "json") {
        ordered_json all = ordered_json::array();
        for (const auto& k : lines) all.push_back(cs::to_json(k));
        out << all.dump(2) << '\n';
    } else {
        for (const auto& k : lines) {
            out << "- " << k.document_id << " " << k.sentence_index << ":" << k.start_position << " "
                << cs::format_kwic(k) << '\n';
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Category frequency, n-gram and translation shift analysis for parallel corpora"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("-o,--out", g.out, "write output to this file instead of stdout");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"csv", "json", "markdown"}));
    app.add_option("--alpha", g.alpha, "significance level of the final test")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--seed", g.seed, "seed for randomized utilities");

    CorpusArgs corpus;
    DictArgs dict;
    SpecArgs spec;

    auto* ingest = app.add_subcommand("ingest", "tokenize a corpus and report word tokens and types");
    std::string tokens_dir;
    add_corpus(ingest, corpus);
    ingest->add_option("--tokens-dir", tokens_dir, "also write one tokenized text per document here");

    auto* stats = app.add_subcommand("stats", "descriptive statistics of label,value tables");
    std::vector<std::string> stats_inputs;
    stats->add_option("inputs", stats_inputs, "label,value CSV files")->required()->check(CLI::ExistingFile);

    auto* compare = app.add_subcommand("compare", "normality check, variance check, then t or rank test");
    std::string left;
    std::string right;
    double normality_alpha = 0.05;
    double variance_alpha = 0.05;
    compare->add_option("--left", left, "left sample (label,value CSV)")->required()->check(CLI::ExistingFile);
    compare->add_option("--right", right, "right sample (label,value CSV)")->required()->check(CLI::ExistingFile);
    compare->add_option("--normality-alpha", normality_alpha, "level of the Shapiro-Wilk checks")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
    compare->add_option("--variance-alpha", variance_alpha, "level of the Levene check")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));

    auto* freq = app.add_subcommand("freq", "category frequencies per document");
    std::vector<std::string> freq_categories;
    add_corpus(freq, corpus);
    add_dict(freq, dict);
    freq->add_option("--category", freq_categories, "only these categories (name or id)");

    auto* topwords = app.add_subcommand("topwords", "most frequent words of a category");
    std::string top_category;
    std::size_t k = 10;
    add_corpus(topwords, corpus);
    add_dict(topwords, dict);
    topwords->add_option("--category", top_category, "category name or id")->required();
    topwords->add_option("-k,--top", k, "number of words")->capture_default_str();

    auto* ngrams = app.add_subcommand("ngrams", "recurrent word n-grams");
    std::string ngram_category;
    add_corpus(ngrams, corpus);
    add_spec(ngrams, spec);
    ngrams->add_option("--dict", dict.dic, "dictionary for --category")->check(CLI::ExistingFile);
    ngrams->add_option("--hierarchy", dict.hierarchy, "category hierarchy TSV")->check(CLI::ExistingFile);
    ngrams->add_option("--category", ngram_category, "keep n-grams holding a word of this category");

    auto* align = app.add_subcommand("align", "sentence alignment table of two corpora");
    CorpusArgs src;
    CorpusArgs tgt;
    std::string check;
    add_corpus(align, src, "src", "source");
    add_corpus(align, tgt, "tgt", "target");
    align->add_option("--check", check, "validate and normalize this alignment table instead of aligning")
        ->check(CLI::ExistingFile);

    auto* shift = app.add_subcommand("shift", "classify category-bearing n-grams against the translation");
    ShiftArgs sa;
    add_corpus(shift, sa.src, "src", "source");
    add_corpus(shift, sa.tgt, "tgt", "target");
    add_dict(shift, sa.src_dict, "src");
    add_dict(shift, sa.tgt_dict, "tgt");
    shift->add_option("--align", sa.align, "alignment table")->required()->check(CLI::ExistingFile);
    shift->add_option("--category", sa.category, "source category name or id")->required();
    shift->add_option("--tgt-category", sa.tgt_category, "target category (default: same name)");
    shift->add_option("--width", sa.width, "KWIC context in tokens")->capture_default_str();
    add_spec(shift, sa.spec);

    auto* kw = app.add_subcommand("kwic", "keyword-in-context lines for a word sequence");
    std::string pattern;
    std::size_t width = 5;
    add_corpus(kw, corpus);
    kw->add_option("--pattern", pattern, "words to find, space separated")->required();
    kw->add_option("--width", width, "context in tokens")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::ostringstream out;
    try {
        if (*ingest) run_ingest(g, corpus, tokens_dir, out);
        if (*stats) run_stats(g, stats_inputs, out);
        if (*compare) run_compare(g, left, right, normality_alpha, variance_alpha, out);
        if (*freq) run_freq(g, corpus, dict, freq_categories, out);
        if (*topwords) run_topwords(g, corpus, dict, top_category, k, out);
        if (*ngrams) run_ngrams(g, corpus, spec, dict, ngram_category, out);
        if (*align) run_align(g, src, tgt, check, out);
        if (*shift) run_shift(g, sa, out);
        if (*kw) run_kwic(g, corpus, pattern, width, out);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const cs::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    if (g.out.empty()) {
        std::cout << out.str();
        return std::cout ? 0 : 1;
    }
    std::ofstream f(g.out, std::ios::binary);
    f << out.str();
    if (!f) {
        std::cerr << "error: cannot write '" << g.out << "'\n";
        return 1;
    }
    return 0;
}
