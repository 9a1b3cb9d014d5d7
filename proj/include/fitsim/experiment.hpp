#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fitsim/scenario.hpp"
#include "fitsim/stats.hpp"

namespace fitsim {

enum class ComparisonUnit { Customer, Replication };

struct ExperimentSpec {
    ScenarioConfig scenario = ScenarioConfig::calibrated_default();
    int replications = 100;
    std::uint64_t base_seed = 945170933;
    std::vector<Paradigm> paradigms{Paradigm::DES, Paradigm::ABS};
    std::optional<std::string> reference_sample_path;
    double alpha = 0.05;
    double variance_threshold_percent = 10.0;
    ComparisonUnit comparison_unit = ComparisonUnit::Customer;
    double histogram_bin_width = 0.5;
    int threads = 0;  // 0 = one per available processor

    void validate() const;  // throws ValidationError naming the field
    std::uint64_t replication_seed(int index) const { return base_seed + static_cast<std::uint64_t>(index); }
};

// Replication batches. The parallel runner distributes replications across
// OpenMP threads; results are identical to the serial runner because every
// replication is seeded independently and shares nothing.
std::vector<ReplicationResult> run_batch_serial(const ScenarioConfig& config,
                                                Paradigm paradigm,
                                                std::uint64_t base_seed, int replications);
std::vector<ReplicationResult> run_batch(const ScenarioConfig& config, Paradigm paradigm,
                                         std::uint64_t base_seed, int replications,
                                         int threads = 0);

// Pools the configured waiting metric across a batch: per-customer total
// waits (or per-visit queue waits), or one mean per replication.
Sample pooled_sample(const std::vector<ReplicationResult>& batch, WaitingMetric metric,
                     ComparisonUnit unit, const std::string& label);

struct ReplicationSummary {
    int index = 0;
    std::uint64_t seed = 0;
    long arrived = 0;
    long completed = 0;
    long in_system_at_close = 0;
    std::optional<double> mean_wait;  // absent when nothing completed
    std::array<double, 3> busy_minutes{};
    double elapsed_minutes = 0.0;
    bool stability_warning = false;
};

struct ParadigmResults {
    Paradigm paradigm = Paradigm::DES;
    std::vector<ReplicationSummary> replications;
    Sample pooled;  // per the spec's waiting metric and comparison unit
    std::optional<DescriptiveStats> pooled_stats;
    std::optional<std::array<double, 3>> mean_workload_fractions;
    std::vector<HistogramBin> histogram;
};

struct ValidationBlock {
    std::optional<MannWhitneyResult> mw_des_vs_reference;
    std::optional<MannWhitneyResult> mw_abs_vs_reference;
    std::optional<MannWhitneyResult> mw_des_vs_abs;
    std::optional<VarianceComparison> var_des_vs_reference;
    std::optional<VarianceComparison> var_abs_vs_reference;

    bool any_present() const {
        return mw_des_vs_reference || mw_abs_vs_reference || mw_des_vs_abs ||
               var_des_vs_reference || var_abs_vs_reference;
    }
    // True when any test rejects its null or finds the variances different.
    bool any_reject_or_different() const;
};

struct ExperimentReport {
    std::string artifact_version;
    std::string timestamp;        // excluded from reproducibility comparisons
    double total_wall_seconds = 0.0;  // likewise volatile
    ExperimentSpec spec;
    std::optional<Sample> reference;
    std::vector<ParadigmResults> paradigms;
    ValidationBlock validation;

    const ParadigmResults* results_for(Paradigm p) const;
};

using RawBatches = std::vector<std::pair<Paradigm, std::vector<ReplicationResult>>>;

// Runs every requested paradigm, pools the outputs and applies the two
// validation tests against the reference sample (when one is supplied) plus
// the cross-paradigm test (when both paradigms ran). When no sample is
// passed and the spec names a reference file, that file is loaded. Raw
// replication results land in `raw_out` when requested.
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                std::optional<Sample> reference = std::nullopt,
                                RawBatches* raw_out = nullptr);

// One extra day of the scenario under a held-out seed, for exercising the
// validation pipeline without real observations.
Sample synthetic_reference_sample(const ScenarioConfig& config, std::uint64_t base_seed);

struct CalibrationTargets {
    double mean_wait = 1.68;  // minutes
    std::array<double, 3> workload_fractions{0.45, 0.10, 0.45};
};

struct CalibrationOutcome {
    ScenarioConfig config;
    double achieved_mean_wait = 0.0;
    std::array<double, 3> achieved_fractions{};
    int evaluations = 0;
};

// Fixes the service-time scale and help probability from the workload
// split, then bisects the arrival rate until the pooled mean wait over
// `replications` runs lands within `tolerance` of the target.
CalibrationOutcome calibrate(const CalibrationTargets& targets, double tolerance = 0.05,
                             int max_iterations = 48, int replications = 100,
                             std::uint64_t seed = 945170933, int threads = 0);

extern const char* const kArtifactVersion;

}  // namespace fitsim
