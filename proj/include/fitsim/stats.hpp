#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "fitsim/errors.hpp"

namespace fitsim {

struct Sample {
    std::vector<double> values;
    std::string label;

    std::size_t size() const { return values.size(); }
};

struct DescriptiveStats {
    std::size_t count = 0;
    double mean = 0.0;
    double median = 0.0;
    double variance = 0.0;  // n-1 denominator
    double std_dev = 0.0;
};

double sample_mean(const Sample& s);
double sample_median(const Sample& s);  // even sizes: mean of the two middle order statistics
double sample_variance(const Sample& s);

// Throws EmptySample for size 0 and VarianceUndefined for size 1.
DescriptiveStats describe(const Sample& s);

enum class MWMethod { ExactPermutation, NormalApproximation };

// Method selection for mann_whitney_u: Auto switches to the normal
// approximation once the pooled size exceeds 16.
enum class MWMethodChoice { Auto, ForceExact, ForceNormal };

struct MannWhitneyResult {
    double u_statistic = 0.0;  // min(U1, U2), the conventional tabled statistic
    MWMethod method = MWMethod::ExactPermutation;
    double z = 0.0;  // NaN unless method is the normal approximation
    double p_two_sided = 1.0;
    double alpha = 0.05;
    bool reject_null = false;  // holds iff p_two_sided < alpha
    bool degenerate = false;   // pooled sample constant; p pinned to 1
    std::size_t n1 = 0;
    std::size_t n2 = 0;
};

// Two-sided Mann-Whitney U. Ranks are computed on the pooled sample with
// average ranks for ties. The exact route enumerates all C(n1+n2, n1) label
// assignments and counts those at least as far from n1*n2/2 as the observed
// statistic; the normal route uses the tie-corrected variance with a 0.5
// continuity correction.
MannWhitneyResult mann_whitney_u(const Sample& a, const Sample& b, double alpha = 0.05,
                                 MWMethodChoice choice = MWMethodChoice::Auto);

// One-line human verdict, e.g.
//   "p=0.3269 vs alpha=0.05: insufficient evidence to reject"
std::string mw_verdict_line(const MannWhitneyResult& r);

struct VarianceComparison {
    double variance_model = 0.0;
    double variance_reference = 0.0;
    double percent_difference = 0.0;  // |vm - vr| / vr * 100
    double similarity_threshold = 10.0;
    bool similar = false;  // percent_difference <= threshold

    std::string verdict() const { return similar ? "similar" : "different"; }
};

VarianceComparison variance_comparison_values(double variance_model,
                                              double variance_reference,
                                              double threshold_percent = 10.0);
VarianceComparison variance_comparison(const Sample& model, const Sample& reference,
                                       double threshold_percent = 10.0);

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

// Half-open bins [origin + k*w, origin + (k+1)*w), contiguous from the
// lowest to the highest occupied bin. Counts sum to the sample size.
std::vector<HistogramBin> histogram(const Sample& s, double bin_width, double origin = 0.0);

}  // namespace fitsim
