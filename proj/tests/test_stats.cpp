#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fitsim/stats.hpp"
#include "mw_oracle.hpp"

using namespace fitsim;
namespace oracle = mw_oracle;

TEST_CASE("describe on tiny samples") {
    const auto d = describe(Sample{{1, 2, 3}, "t"});
    CHECK(d.mean == 2.0);
    CHECK(d.median == 2.0);
    CHECK(d.variance == 1.0);
    CHECK(d.std_dev == 1.0);

    CHECK(sample_median(Sample{{1, 2, 3, 4}, "t"}) == 2.5);

    const auto c = describe(Sample{{5, 5, 5, 5}, "t"});
    CHECK(c.variance == 0.0);
    CHECK(c.std_dev == 0.0);

    CHECK_THROWS_AS(describe(Sample{{}, "t"}), EmptySample);
    CHECK_THROWS_AS(describe(Sample{{1.0}, "t"}), VarianceUndefined);
    CHECK(sample_mean(Sample{{1.0}, "t"}) == 1.0);
}

TEST_CASE("identical samples give the central U and p = 1") {
    const auto r = mann_whitney_u(Sample{{1, 2, 3}, "a"}, Sample{{1, 2, 3}, "b"});
    CHECK(r.u_statistic == 4.5);  // n1*n2/2
    CHECK(r.p_two_sided == 1.0);
    CHECK_FALSE(r.reject_null);
    CHECK(r.method == MWMethod::ExactPermutation);
}

TEST_CASE("fully separated tiny samples: exact p = 2/20") {
    const auto r = mann_whitney_u(Sample{{1, 2, 3}, "a"}, Sample{{4, 5, 6}, "b"});
    CHECK(r.u_statistic == 0.0);
    CHECK(r.p_two_sided == doctest::Approx(0.10).epsilon(1e-12));
    CHECK_FALSE(r.reject_null);  // 0.10 > 0.05
}

TEST_CASE("exact p agrees with the brute-force enumeration oracle") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    for (int trial = 0; trial < 60; ++trial) {
        const std::size_t n1 = 1 + gen() % 5;
        const std::size_t n2 = 1 + gen() % 5;
        std::vector<double> a(n1), b(n2);
        for (auto& x : a) x = value(gen);
        for (auto& x : b) x = value(gen);
        if (trial % 3 == 0 && !a.empty() && !b.empty()) b[0] = a[0];  // force a tie sometimes
        const auto r = mann_whitney_u(Sample{a, "a"}, Sample{b, "b"});
        REQUIRE(r.method == MWMethod::ExactPermutation);
        REQUIRE(r.p_two_sided == oracle::exact_p(a, b));
    }
}

TEST_CASE("mann-whitney is symmetric in its arguments") {
    const Sample a{{0.3, 1.7, 2.2, 5.1}, "a"};
    const Sample b{{0.9, 1.1, 4.0}, "b"};
    const auto ab = mann_whitney_u(a, b);
    const auto ba = mann_whitney_u(b, a);
    CHECK(ab.p_two_sided == ba.p_two_sided);
    CHECK(ab.u_statistic == ba.u_statistic);

    const Sample big_a{[&]() {
                           std::vector<double> v;
                           std::mt19937 g(3);
                           for (int i = 0; i < 40; ++i) v.push_back(g() % 1000 / 7.0);
                           return v;
                       }(),
                       "a"};
    const Sample big_b{[&]() {
                           std::vector<double> v;
                           std::mt19937 g(4);
                           for (int i = 0; i < 35; ++i) v.push_back(g() % 1000 / 7.0);
                           return v;
                       }(),
                       "b"};
    const auto ab2 = mann_whitney_u(big_a, big_b);
    const auto ba2 = mann_whitney_u(big_b, big_a);
    CHECK(ab2.method == MWMethod::NormalApproximation);
    CHECK(ab2.p_two_sided == ba2.p_two_sided);
}

TEST_CASE("U and p are invariant under strictly increasing transforms") {
    const Sample a{{0.4, 1.3, 2.9, 3.3, 7.0}, "a"};
    const Sample b{{0.8, 2.1, 2.9, 5.5}, "b"};
    auto cubed = [](const Sample& s) {
        Sample t = s;
        for (auto& v : t.values) v = v * v * v;
        return t;
    };
    const auto raw = mann_whitney_u(a, b);
    const auto xf = mann_whitney_u(cubed(a), cubed(b));
    CHECK(raw.u_statistic == xf.u_statistic);
    CHECK(raw.p_two_sided == xf.p_two_sided);
}

TEST_CASE("constant pooled samples are flagged degenerate with p = 1") {
    const auto r = mann_whitney_u(Sample{{2, 2}, "a"}, Sample{{2, 2, 2}, "b"});
    CHECK(r.degenerate);
    CHECK(r.p_two_sided == 1.0);
    CHECK_FALSE(r.reject_null);
}

TEST_CASE("exact and normal methods agree to 0.05 on a mid-size sample") {
    const Sample a{{1.2, 3.4, 0.2, 7.7, 2.1, 4.4}, "a"};
    const Sample b{{2.8, 5.1, 6.6, 0.9, 3.0}, "b"};
    const auto exact = mann_whitney_u(a, b, 0.05, MWMethodChoice::ForceExact);
    const auto normal = mann_whitney_u(a, b, 0.05, MWMethodChoice::ForceNormal);
    CHECK(std::fabs(exact.p_two_sided - normal.p_two_sided) <= 0.05);
    CHECK(std::isfinite(normal.z));
}

TEST_CASE("verdict line format") {
    MannWhitneyResult r;
    r.p_two_sided = 0.3269;
    r.alpha = 0.05;
    r.reject_null = false;
    CHECK(mw_verdict_line(r) == "p=0.3269 vs alpha=0.05: insufficient evidence to reject");
    r.p_two_sided = 0.0123;
    r.reject_null = true;
    CHECK(mw_verdict_line(r) == "p=0.0123 vs alpha=0.05: reject the null hypothesis");
}

TEST_CASE("variance comparison reproduces the headline percentages") {
    const auto des = variance_comparison_values(1.96, 3.01);
    CHECK(des.percent_difference == doctest::Approx(34.9).epsilon(0.002));
    CHECK_FALSE(des.similar);
    CHECK(des.verdict() == "different");

    const auto abs = variance_comparison_values(2.89, 3.01);
    CHECK(abs.percent_difference == doctest::Approx(4.0).epsilon(0.01));
    CHECK(abs.similar);
    CHECK(abs.verdict() == "similar");

    const auto same = variance_comparison_values(3.01, 3.01);
    CHECK(same.percent_difference == 0.0);
    CHECK(same.similar);
}

TEST_CASE("variance comparison guards its inputs") {
    CHECK_THROWS_AS(variance_comparison_values(1.0, 0.0), ZeroReferenceVariance);
    CHECK_THROWS_AS(
        variance_comparison(Sample{{1.0}, "m"}, Sample{{1.0, 2.0}, "r"}),
        VarianceUndefined);
}

TEST_CASE("sample variance obeys the scale law") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> value(0.0, 3.0);
    std::vector<double> xs(200);
    for (auto& x : xs) x = value(gen);
    const double base = sample_variance(Sample{xs, "x"});
    for (double c : {2.0, 10.0, 0.25}) {
        std::vector<double> scaled = xs;
        for (auto& x : scaled) x *= c;
        const double got = sample_variance(Sample{scaled, "cx"});
        CHECK(std::fabs(got - c * c * base) <= 1e-9 * c * c * base);
    }
}

TEST_CASE("histogram bins as documented") {
    const auto bins = histogram(Sample{{0.5, 1.2, 1.4, 2.8}, "h"}, 1.0, 0.0);
    REQUIRE(bins.size() == 3);
    CHECK(bins[0].count == 1);
    CHECK(bins[1].count == 2);
    CHECK(bins[2].count == 1);
    CHECK(bins[0].lower == 0.0);
    CHECK(bins[2].upper == 3.0);

    // boundary values land in the right-hand bin
    const auto edge = histogram(Sample{{1.0}, "h"}, 1.0, 0.0);
    REQUIRE(edge.size() == 1);
    CHECK(edge[0].lower == 1.0);
    CHECK(edge[0].upper == 2.0);

    const auto repeated = histogram(Sample{{2.5, 2.5, 2.5, 2.5, 2.5}, "h"}, 1.0, 0.0);
    REQUIRE(repeated.size() == 1);
    CHECK(repeated[0].count == 5);

    CHECK_THROWS_AS(histogram(Sample{{1.0}, "h"}, 0.0, 0.0), InvalidBinWidth);
    CHECK_THROWS_AS(histogram(Sample{{1.0}, "h"}, -1.0, 0.0), InvalidBinWidth);
}

TEST_CASE("histogram conserves the sample size") {
    std::mt19937 gen(17);
    std::normal_distribution<double> value(5.0, 4.0);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 1 + gen() % 500;
        Sample s;
        for (std::size_t i = 0; i < n; ++i) s.values.push_back(value(gen));
        const double width = 0.1 + (gen() % 100) / 25.0;
        std::size_t total = 0;
        for (const auto& bin : histogram(s, width, -1.0)) total += bin.count;
        REQUIRE(total == n);
    }
}
