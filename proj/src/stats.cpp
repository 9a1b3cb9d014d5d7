#include "fitsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace fitsim {

namespace {

void require_nonempty(const Sample& s) {
    if (s.values.empty()) {
        throw EmptySample("sample '" + s.label + "' is empty");
    }
}

// Pooled average ranks, doubled so they stay integers under ties.
// (A tie group spanning 1-based positions [s, e] gets rank (s + e) / 2.)
std::vector<std::int64_t> doubled_ranks(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    std::vector<std::int64_t> r2(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && sorted[j] == sorted[i]) ++j;
        const std::int64_t doubled = static_cast<std::int64_t>(i + j + 1);  // (i+1) + j
        for (std::size_t k = i; k < j; ++k) r2[k] = doubled;
        i = j;
    }
    return r2;
}

// Number of label assignments whose statistic is at least as extreme as
// d_obs, where extremeness is |2*U1 - n1*n2| on the fixed pooled ranks.
double exact_two_sided_p(const std::vector<std::int64_t>& r2, std::size_t n1,
                         std::int64_t d_obs) {
    const std::size_t n = r2.size();
    std::vector<std::size_t> pick(n1);
    std::iota(pick.begin(), pick.end(), 0);
    const std::int64_t n1n2 =
        static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(n - n1);
    const std::int64_t shift = static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(n1 + 1);

    std::uint64_t matched = 0;
    std::uint64_t total = 0;
    while (true) {
        std::int64_t r2sum = 0;
        for (std::size_t idx : pick) r2sum += r2[idx];
        // 2*U1 = 2*n1*n2 + n1*(n1+1) - 2*R1
        const std::int64_t u2 = 2 * n1n2 + shift - r2sum;
        if (std::llabs(u2 - n1n2) >= d_obs) ++matched;
        ++total;

        // advance to the next combination
        std::size_t k = n1;
        while (k > 0 && pick[k - 1] == n - n1 + k - 1) --k;
        if (k == 0) break;
        ++pick[k - 1];
        for (std::size_t j = k; j < n1; ++j) pick[j] = pick[j - 1] + 1;
    }
    return static_cast<double>(matched) / static_cast<double>(total);
}

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

}  // namespace

double sample_mean(const Sample& s) {
    require_nonempty(s);
    return std::accumulate(s.values.begin(), s.values.end(), 0.0) /
           static_cast<double>(s.values.size());
}

double sample_median(const Sample& s) {
    require_nonempty(s);
    std::vector<double> v = s.values;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    if (n % 2 == 1) return v[n / 2];
    return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double sample_variance(const Sample& s) {
    if (s.values.size() < 2) {
        throw VarianceUndefined("variance needs at least 2 values, sample '" + s.label +
                                "' has " + std::to_string(s.values.size()));
    }
    const double m = sample_mean(s);
    double acc = 0.0;
    for (double x : s.values) acc += (x - m) * (x - m);
    return acc / static_cast<double>(s.values.size() - 1);
}

DescriptiveStats describe(const Sample& s) {
    require_nonempty(s);
    DescriptiveStats d;
    d.count = s.values.size();
    d.mean = sample_mean(s);
    d.median = sample_median(s);
    d.variance = sample_variance(s);  // throws for size 1
    d.std_dev = std::sqrt(d.variance);
    return d;
}

MannWhitneyResult mann_whitney_u(const Sample& a, const Sample& b, double alpha,
                                 MWMethodChoice choice) {
    require_nonempty(a);
    require_nonempty(b);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw Error("alpha must lie in (0, 1)");
    }
    const std::size_t n1 = a.size();
    const std::size_t n2 = b.size();
    const std::size_t n = n1 + n2;

    // Pool, remembering which observations belong to `a`.
    std::vector<std::pair<double, int>> pooled;
    pooled.reserve(n);
    for (double x : a.values) pooled.emplace_back(x, 0);
    for (double x : b.values) pooled.emplace_back(x, 1);
    std::sort(pooled.begin(), pooled.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });

    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = pooled[i].first;
    const std::vector<std::int64_t> r2 = doubled_ranks(sorted);

    std::int64_t r2_sum_a = 0;
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
    {
        std::size_t i = 0;
        while (i < n) {
            std::size_t j = i;
            while (j < n && sorted[j] == sorted[i]) ++j;
            const double t = static_cast<double>(j - i);
            tie_sum += t * t * t - t;
            i = j;
        }
        for (std::size_t i2 = 0; i2 < n; ++i2) {
            if (pooled[i2].second == 0) r2_sum_a += r2[i2];
        }
    }

    const double n1n2 = static_cast<double>(n1) * static_cast<double>(n2);
    // U1 = n1*n2 + n1*(n1+1)/2 - R1
    const double r1 = static_cast<double>(r2_sum_a) / 2.0;
    const double u1 = n1n2 + static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0 - r1;

    MannWhitneyResult res;
    res.alpha = alpha;
    res.n1 = n1;
    res.n2 = n2;
    res.u_statistic = std::min(u1, n1n2 - u1);
    res.z = std::numeric_limits<double>::quiet_NaN();

    const bool use_exact = (choice == MWMethodChoice::ForceExact) ||
                           (choice == MWMethodChoice::Auto && n <= 16);
    res.method = use_exact ? MWMethod::ExactPermutation : MWMethod::NormalApproximation;

    if (sorted.front() == sorted.back()) {
        // Pooled sample is constant: every assignment is equally extreme.
        res.degenerate = true;
        res.p_two_sided = 1.0;
        res.reject_null = false;
        return res;
    }

    if (use_exact) {
        if (binomial(n, n1) > 20'000'000ULL) {
            throw Error("exact permutation infeasible for pooled size " + std::to_string(n));
        }
        const std::int64_t n1n2_i =
            static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(n2);
        const std::int64_t shift =
            static_cast<std::int64_t>(n1) * static_cast<std::int64_t>(n1 + 1);
        const std::int64_t u2_obs = 2 * n1n2_i + shift - r2_sum_a;
        const std::int64_t d_obs = std::llabs(u2_obs - n1n2_i);
        res.p_two_sided = exact_two_sided_p(r2, n1, d_obs);
    } else {
        const double nn = static_cast<double>(n);
        const double tie_correction = tie_sum / (nn * (nn - 1.0));
        const double sigma2 = (n1n2 / 12.0) * ((nn + 1.0) - tie_correction);
        if (sigma2 <= 0.0) {
            res.degenerate = true;
            res.p_two_sided = 1.0;
            res.reject_null = false;
            return res;
        }
        const double sigma = std::sqrt(sigma2);
        const double dist = std::max(std::fabs(u1 - n1n2 / 2.0) - 0.5, 0.0);
        res.z = dist / sigma;
        res.p_two_sided = std::clamp(std::erfc(res.z / std::sqrt(2.0)), 0.0, 1.0);
    }
    res.reject_null = res.p_two_sided < alpha;
    return res;
}

std::string mw_verdict_line(const MannWhitneyResult& r) {
    std::ostringstream out;
    out << "p=" << std::fixed << std::setprecision(4) << r.p_two_sided
        << " vs alpha=" << std::defaultfloat << std::setprecision(6) << r.alpha << ": "
        << (r.reject_null ? "reject the null hypothesis"
                          : "insufficient evidence to reject");
    return out.str();
}

VarianceComparison variance_comparison_values(double variance_model,
                                              double variance_reference,
                                              double threshold_percent) {
    if (!(variance_reference > 0.0)) {
        throw ZeroReferenceVariance("reference variance must be > 0");
    }
    if (variance_model < 0.0) {
        throw VarianceUndefined("model variance must be >= 0");
    }
    VarianceComparison vc;
    vc.variance_model = variance_model;
    vc.variance_reference = variance_reference;
    vc.similarity_threshold = threshold_percent;
    vc.percent_difference =
        std::fabs(variance_model - variance_reference) / variance_reference * 100.0;
    vc.similar = vc.percent_difference <= threshold_percent;
    return vc;
}

VarianceComparison variance_comparison(const Sample& model, const Sample& reference,
                                       double threshold_percent) {
    return variance_comparison_values(sample_variance(model), sample_variance(reference),
                                      threshold_percent);
}

std::vector<HistogramBin> histogram(const Sample& s, double bin_width, double origin) {
    if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
        throw InvalidBinWidth("bin width must be a positive finite number");
    }
    if (s.values.empty()) return {};

    std::int64_t kmin = std::numeric_limits<std::int64_t>::max();
    std::int64_t kmax = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> ks;
    ks.reserve(s.values.size());
    for (double x : s.values) {
        const auto k = static_cast<std::int64_t>(std::floor((x - origin) / bin_width));
        ks.push_back(k);
        kmin = std::min(kmin, k);
        kmax = std::max(kmax, k);
    }
    std::vector<HistogramBin> bins(static_cast<std::size_t>(kmax - kmin + 1));
    for (std::size_t i = 0; i < bins.size(); ++i) {
        const double lo = origin + static_cast<double>(kmin + static_cast<std::int64_t>(i)) * bin_width;
        bins[i].lower = lo;
        bins[i].upper = lo + bin_width;
    }
    for (std::int64_t k : ks) ++bins[static_cast<std::size_t>(k - kmin)].count;
    return bins;
}

}  // namespace fitsim
