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

// Descriptive statistics and two-sample tests for per-document category
// frequencies.
//
// compare_samples() routes a comparison the usual way: Shapiro-Wilk on each
// sample, then Brown-Forsythe (median-centred Levene) for equal variances;
// both normal -> Student t (equal variances) or Welch t; otherwise
// Mann-Whitney U.

#include "corpusshift/distributions.hpp"
#include "corpusshift/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace corpusshift {

struct Sample {
    std::vector<double> values;
    std::string label;

    std::size_t size() const noexcept { return values.size(); }
};

struct DescriptiveStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0; ///< n - 1 denominator
    double median = 0.0;
    double iqr = 0.0; ///< Tukey hinges
};

enum class TestMethod { student_t, welch_t, mann_whitney_u, shapiro_wilk, levene };

constexpr std::string_view method_name(TestMethod m) noexcept {
    switch (m) {
    case TestMethod::student_t: return "student_t";
    case TestMethod::welch_t: return "welch_t";
    case TestMethod::mann_whitney_u: return "mann_whitney_u";
    case TestMethod::shapiro_wilk: return "shapiro_wilk";
    case TestMethod::levene: return "levene";
    }
    return "unknown";
}

struct TestResult {
    TestMethod method = TestMethod::student_t;
    double statistic = 0.0;
    std::optional<double> df; ///< absent when the test has no degrees of freedom
    std::optional<double> df2; ///< denominator df of an F statistic
    double p_value = 1.0;
    double alpha = 0.05;
    bool significant = false;
};

struct ComparisonPlan {
    double normality_alpha = 0.05;
    double variance_alpha = 0.05;
    double test_alpha = 0.05;

    void validate() const {
        for (double a : {normality_alpha, variance_alpha, test_alpha}) {
            if (!(a > 0.0 && a < 1.0)) {
                throw Error(ErrorCode::InvalidArgument, "alpha levels must lie in (0, 1)");
            }
        }
    }
};

/// Outcome of compare_samples(): the chosen test plus the checks that chose it.
struct Comparison {
    TestResult result;
    TestResult normality_left;
    TestResult normality_right;
    std::optional<TestResult> variance; ///< only run when both samples pass normality
};

enum class TVariant { student, welch };

namespace detail {

inline void require_finite(const Sample& s) {
    for (double v : s.values) {
        if (!std::isfinite(v)) {
            throw Error(ErrorCode::InvalidArgument, "sample '" + s.label + "' holds a non-finite value");
        }
    }
}

inline void require_size(const Sample& s, std::size_t minimum) {
    require_finite(s);
    if (s.size() < minimum) {
        throw Error(ErrorCode::SampleTooSmall, "sample '" + s.label + "' has " + std::to_string(s.size()) +
                                                   " values; at least " + std::to_string(minimum) + " required");
    }
}

inline double median_sorted(std::span<const double> v) {
    const std::size_t n = v.size();
    if (n == 0) return 0.0;
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

inline double mean(std::span<const double> v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size() - 1);
}

inline TestResult make_result(TestMethod method, double statistic, std::optional<double> df, double p,
                              double alpha) {
    p = std::clamp(p, 0.0, 1.0);
    TestResult r;
    r.method = method;
    r.statistic = statistic;
    r.df = df;
    r.p_value = p;
    r.alpha = alpha;
    r.significant = p < alpha;
    return r;
}

inline double poly(std::span<const double> c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

/// Average ranks (1-based) of the pooled values; returns the tie term
/// sum(t^3 - t) over tie groups.
inline double pooled_ranks(std::span<const double> a, std::span<const double> b, std::vector<double>& ranks) {
    const std::size_t n = a.size() + b.size();
    std::vector<std::pair<double, std::size_t>> pooled;
    pooled.reserve(n);
    for (std::size_t i = 0; i < a.size(); ++i) pooled.emplace_back(a[i], i);
    for (std::size_t i = 0; i < b.size(); ++i) pooled.emplace_back(b[i], a.size() + i);
    std::sort(pooled.begin(), pooled.end());
    ranks.assign(n, 0.0);
    double tie_term = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[j].first == pooled[i].first) ++j;
        const double rank = 0.5 * static_cast<double>(i + j + 1);
        for (std::size_t k = i; k < j; ++k) ranks[pooled[k].second] = rank;
        const double t = static_cast<double>(j - i);
        tie_term += t * t * t - t;
        i = j;
    }
    return tie_term;
}

} // namespace detail

inline DescriptiveStats describe(const Sample& sample) {
    detail::require_finite(sample);
    if (sample.values.empty()) {
        throw Error(ErrorCode::EmptySample, "sample '" + sample.label + "' is empty");
    }
    std::vector<double> v = sample.values;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    DescriptiveStats d;
    d.n = n;
    d.mean = detail::mean(v);
    d.sd = std::sqrt(detail::variance(v));
    d.median = detail::median_sorted(v);
    // Tukey hinges: medians of the halves, the middle value excluded for odd n.
    const std::size_t half = n / 2;
    const std::span<const double> all(v);
    const double lower = detail::median_sorted(all.subspan(0, half));
    const double upper = detail::median_sorted(all.subspan(n - half, half));
    d.iqr = half == 0 ? 0.0 : upper - lower;
    return d;
}

/// Shapiro-Wilk W with Royston's normalizing transformation for the p-value
/// (the AS R94 algorithm), valid for 3 <= n <= 5000.
inline TestResult shapiro_wilk(const Sample& sample, double alpha = 0.05) {
    detail::require_size(sample, 3);
    const std::size_t n = sample.size();
    if (n > 5000) {
        throw Error(ErrorCode::InvalidArgument, "Shapiro-Wilk supports at most 5000 values");
    }
    std::vector<double> x = sample.values;
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) {
        throw Error(ErrorCode::DegenerateSample, "sample '" + sample.label + "' has zero range");
    }

    static constexpr double g[] = {-2.273, 0.459};
    static constexpr double c1[] = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    static constexpr double c2[] = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    static constexpr double c3[] = {0.544, -0.39978, 0.025054, -6.714e-4};
    static constexpr double c4[] = {1.3822, -0.77857, 0.062767, -0.0020322};
    static constexpr double c5[] = {-1.5861, -0.31082, -0.083751, 0.0038915};
    static constexpr double c6[] = {-0.4803, -0.082676, 0.0030302};

    const double an = static_cast<double>(n);
    const std::size_t half = n / 2;
    // Coefficients for the upper half, largest order statistic first.
    std::vector<double> a(half, 0.0);
    if (n == 3) {
        a[0] = std::sqrt(0.5);
    } else {
        std::vector<double> m(half);
        double summ2 = 0.0;
        for (std::size_t i = 0; i < half; ++i) {
            m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
            summ2 += m[i] * m[i];
        }
        summ2 *= 2.0;
        const double ssumm2 = std::sqrt(summ2);
        const double rsn = 1.0 / std::sqrt(an);
        const double a1 = detail::poly(c1, rsn) - m[0] / ssumm2;
        std::size_t first_scaled = 1;
        double fac = 0.0;
        if (n > 5) {
            first_scaled = 2;
            const double a2 = -m[1] / ssumm2 + detail::poly(c2, rsn);
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0] - 2.0 * m[1] * m[1]) /
                            (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
            a[1] = a2;
        } else {
            fac = std::sqrt((summ2 - 2.0 * m[0] * m[0]) / (1.0 - 2.0 * a1 * a1));
        }
        a[0] = a1;
        for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
    }

    // W as the squared correlation between data and coefficients; computing
    // 1 - W directly keeps precision when W is close to 1.
    std::vector<double> coef(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        coef[i] = -a[i];
        coef[n - 1 - i] = a[i];
    }
    double mean_x = 0.0;
    for (double v : x) mean_x += v / range;
    mean_x /= an;
    const double mean_a = std::accumulate(coef.begin(), coef.end(), 0.0) / an;
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = coef[i] - mean_a;
        const double dx = x[i] / range - mean_x;
        ssa += da * da;
        ssx += dx * dx;
        sax += da * dx;
    }
    const double root = std::sqrt(ssa * ssx);
    const double w1 = (root - sax) * (root + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    double p = 1.0;
    if (n == 3) {
        constexpr double six_over_pi = 1.90985931710274;
        constexpr double pi_over_three = 1.04719755119660;
        p = std::max(0.0, six_over_pi * (std::asin(std::sqrt(w)) - pi_over_three));
    } else {
        double y = std::log(w1);
        double mu = 0.0;
        double sigma = 1.0;
        if (n <= 11) {
            const double gamma = detail::poly(g, an);
            if (y >= gamma) {
                return detail::make_result(TestMethod::shapiro_wilk, w, std::nullopt, 1e-99, alpha);
            }
            y = -std::log(gamma - y);
            mu = detail::poly(c3, an);
            sigma = std::exp(detail::poly(c4, an));
        } else {
            const double ln_n = std::log(an);
            mu = detail::poly(c5, ln_n);
            sigma = std::exp(detail::poly(c6, ln_n));
        }
        p = dist::normal_sf((y - mu) / sigma);
    }
    return detail::make_result(TestMethod::shapiro_wilk, w, std::nullopt, p, alpha);
}

/// Brown-Forsythe test (Levene on absolute deviations from group medians) for
/// any number of groups. F has (k - 1, N - k) degrees of freedom.
inline TestResult brown_forsythe(std::span<const Sample> groups, double alpha = 0.05) {
    if (groups.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least two groups");
    std::vector<std::vector<double>> z;
    std::size_t total = 0;
    for (const auto& g : groups) {
        detail::require_size(g, 3);
        std::vector<double> sorted = g.values;
        std::sort(sorted.begin(), sorted.end());
        const double med = detail::median_sorted(sorted);
        std::vector<double> dev;
        dev.reserve(g.size());
        for (double v : g.values) dev.push_back(std::abs(v - med));
        total += dev.size();
        z.push_back(std::move(dev));
    }
    const double k = static_cast<double>(groups.size());
    const double big_n = static_cast<double>(total);
    double grand = 0.0;
    for (const auto& dev : z) grand += std::accumulate(dev.begin(), dev.end(), 0.0);
    grand /= big_n;
    double between = 0.0;
    double within = 0.0;
    for (const auto& dev : z) {
        const double m = detail::mean(dev);
        between += static_cast<double>(dev.size()) * (m - grand) * (m - grand);
        for (double v : dev) within += (v - m) * (v - m);
    }
    TestResult r;
    if (within <= 0.0) {
        r = between <= 0.0
                ? detail::make_result(TestMethod::levene, 0.0, k - 1.0, 1.0, alpha)
                : detail::make_result(TestMethod::levene, std::numeric_limits<double>::infinity(), k - 1.0, 0.0,
                                      alpha);
    } else {
        const double f = ((big_n - k) / (k - 1.0)) * between / within;
        r = detail::make_result(TestMethod::levene, f, k - 1.0, dist::f_sf(f, k - 1.0, big_n - k), alpha);
    }
    r.df2 = big_n - k;
    return r;
}

/// Equal-variance check for two samples (Brown-Forsythe).
inline TestResult variance_equal_test(const Sample& a, const Sample& b, double alpha = 0.05) {
    const Sample groups[] = {a, b};
    return brown_forsythe(groups, alpha);
}

inline TestResult two_sample_t(const Sample& a, const Sample& b, TVariant variant, double alpha = 0.05) {
    detail::require_size(a, 2);
    detail::require_size(b, 2);
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double m1 = detail::mean(a.values);
    const double m2 = detail::mean(b.values);
    const double v1 = detail::variance(a.values);
    const double v2 = detail::variance(b.values);

    double se2 = 0.0;
    double df = 0.0;
    if (variant == TVariant::student) {
        df = n1 + n2 - 2.0;
        const double pooled = ((n1 - 1.0) * v1 + (n2 - 1.0) * v2) / df;
        if (!(pooled > 0.0)) {
            throw Error(ErrorCode::DegenerateSample, "pooled variance is zero");
        }
        se2 = pooled * (1.0 / n1 + 1.0 / n2);
    } else {
        const double q1 = v1 / n1;
        const double q2 = v2 / n2;
        se2 = q1 + q2;
        if (!(se2 > 0.0)) {
            throw Error(ErrorCode::DegenerateSample, "both samples have zero variance");
        }
        df = se2 * se2 / (q1 * q1 / (n1 - 1.0) + q2 * q2 / (n2 - 1.0));
    }
    const double t = (m1 - m2) / std::sqrt(se2);
    const TestMethod method = variant == TVariant::student ? TestMethod::student_t : TestMethod::welch_t;
    return detail::make_result(method, t, df, dist::student_t_two_tailed(t, df), alpha);
}

/// U1 = R1 - n1(n1 + 1)/2 for the first sample.
inline double mann_whitney_u1(const Sample& a, const Sample& b) {
    std::vector<double> ranks;
    detail::pooled_ranks(a.values, b.values, ranks);
    double r1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r1 += ranks[i];
    const double n1 = static_cast<double>(a.size());
    return r1 - n1 * (n1 + 1.0) / 2.0;
}

/// Exact two-tailed p of U <= u for tie-free samples of sizes n1 and n2,
/// from the distribution of U1 over all C(n1 + n2, n1) labelings.
inline double mann_whitney_exact_p(double u, std::size_t n1, std::size_t n2) {
    const std::size_t max_u = n1 * n2;
    using Table = std::vector<std::vector<double>>;
    // cur[k][s]: labelings of the r smallest values with k in the first
    // sample and partial U1 = s.
    Table cur(n1 + 1, std::vector<double>(max_u + 1, 0.0));
    cur[0][0] = 1.0;
    for (std::size_t r = 0; r < n1 + n2; ++r) {
        Table next(n1 + 1, std::vector<double>(max_u + 1, 0.0));
        for (std::size_t k = 0; k <= std::min(r, n1); ++k) {
            const std::size_t second_below = r - k;
            if (second_below > n2) continue;
            for (std::size_t s = 0; s <= max_u; ++s) {
                const double c = cur[k][s];
                if (c == 0.0) continue;
                if (second_below < n2) next[k][s] += c;
                if (k < n1 && s + second_below <= max_u) next[k + 1][s + second_below] += c;
            }
        }
        cur = std::move(next);
    }
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t s = 0; s <= max_u; ++s) {
        total += cur[n1][s];
        if (static_cast<double>(s) <= u + 1e-9) tail += cur[n1][s];
    }
    return std::min(1.0, 2.0 * tail / total);
}

/// Normal approximation with tie and continuity corrections.
inline double mann_whitney_normal_p(double u, std::size_t n1, std::size_t n2, double tie_term) {
    const double a = static_cast<double>(n1);
    const double b = static_cast<double>(n2);
    const double big_n = a + b;
    const double mu = 0.5 * a * b;
    const double var = (a * b / 12.0) * ((big_n + 1.0) - tie_term / (big_n * (big_n - 1.0)));
    if (!(var > 0.0)) return 1.0;
    const double z = std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(var);
    return std::min(1.0, 2.0 * dist::normal_sf(z));
}

/// Mann-Whitney U with U = min(U1, U2). Exact p when n1 + n2 <= 20 and there
/// are no ties, otherwise the normal approximation.
inline TestResult mann_whitney_u(const Sample& a, const Sample& b, double alpha = 0.05) {
    detail::require_size(a, 3);
    detail::require_size(b, 3);
    std::vector<double> ranks;
    const double tie_term = detail::pooled_ranks(a.values, b.values, ranks);
    double r1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r1 += ranks[i];
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double u1 = r1 - n1 * (n1 + 1.0) / 2.0;
    const double u = std::min(u1, n1 * n2 - u1);
    const bool exact = a.size() + b.size() <= 20 && tie_term == 0.0;
    const double p = exact ? mann_whitney_exact_p(u, a.size(), b.size())
                           : mann_whitney_normal_p(u, a.size(), b.size(), tie_term);
    return detail::make_result(TestMethod::mann_whitney_u, u, std::nullopt, p, alpha);
}

inline Comparison compare_samples(const Sample& a, const Sample& b, const ComparisonPlan& plan = {}) {
    plan.validate();
    detail::require_size(a, 3);
    detail::require_size(b, 3);
    Comparison out;
    out.normality_left = shapiro_wilk(a, plan.normality_alpha);
    out.normality_right = shapiro_wilk(b, plan.normality_alpha);
    const bool normal = !out.normality_left.significant && !out.normality_right.significant;
    if (!normal) {
        out.result = mann_whitney_u(a, b, plan.test_alpha);
        return out;
    }
    out.variance = variance_equal_test(a, b, plan.variance_alpha);
    const TVariant variant = out.variance->significant ? TVariant::welch : TVariant::student;
    out.result = two_sample_t(a, b, variant, plan.test_alpha);
    return out;
}

} // namespace corpusshift
