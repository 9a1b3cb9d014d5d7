#include "fitsim/experiment.hpp"

#include "fitsim/report_io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fitsim {

const char* const kArtifactVersion = "0.1.0";

namespace {

std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

int resolve_threads(int requested) {
#ifdef _OPENMP
    return requested > 0 ? requested : omp_get_max_threads();
#else
    (void)requested;
    return 1;
#endif
}

std::optional<double> replication_mean_wait(const ReplicationResult& r) {
    if (r.waiting_time_sample.empty()) return std::nullopt;
    double acc = 0.0;
    for (double w : r.waiting_time_sample) acc += w;
    return acc / static_cast<double>(r.waiting_time_sample.size());
}

ParadigmResults summarize_batch(Paradigm paradigm, const std::vector<ReplicationResult>& batch,
                                const ExperimentSpec& spec) {
    ParadigmResults out;
    out.paradigm = paradigm;
    out.replications.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const ReplicationResult& r = batch[i];
        ReplicationSummary s;
        s.index = static_cast<int>(i);
        s.seed = r.seed;
        s.arrived = r.customers_arrived;
        s.completed = r.customers_completed;
        s.in_system_at_close = r.in_system_at_close;
        s.mean_wait = replication_mean_wait(r);
        s.busy_minutes = r.staff_busy_minutes_by_job;
        s.elapsed_minutes = r.elapsed_minutes;
        s.stability_warning = r.stability_warning;
        out.replications.push_back(s);
    }

    out.pooled = pooled_sample(batch, spec.scenario.waiting_metric, spec.comparison_unit,
                               to_string(paradigm));
    if (out.pooled.size() >= 2) {
        out.pooled_stats = describe(out.pooled);
    }

    std::array<double, 3> fraction_sum{};
    int fraction_reps = 0;
    for (const ReplicationResult& r : batch) {
        try {
            const auto f = workload_fractions(r);
            for (int j = 0; j < 3; ++j) fraction_sum[j] += f[j];
            ++fraction_reps;
        } catch (const NoBusyTime&) {
        }
    }
    if (fraction_reps > 0) {
        out.mean_workload_fractions = {fraction_sum[0] / fraction_reps,
                                       fraction_sum[1] / fraction_reps,
                                       fraction_sum[2] / fraction_reps};
    }

    if (!out.pooled.values.empty()) {
        out.histogram = histogram(out.pooled, spec.histogram_bin_width, 0.0);
    }
    return out;
}

}  // namespace

void ExperimentSpec::validate() const {
    scenario.validate();
    if (replications < 1) throw ValidationError("replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
    if (!(variance_threshold_percent > 0.0)) {
        throw ValidationError("variance_threshold_percent must be > 0");
    }
    if (!(histogram_bin_width > 0.0)) {
        throw ValidationError("histogram_bin_width must be > 0");
    }
    if (threads < 0) throw ValidationError("threads must be >= 0");
    if (paradigms.empty()) throw ValidationError("paradigms must not be empty");
}

std::vector<ReplicationResult> run_batch_serial(const ScenarioConfig& config,
                                                Paradigm paradigm, std::uint64_t base_seed,
                                                int replications) {
    std::vector<ReplicationResult> out;
    out.reserve(static_cast<std::size_t>(replications));
    for (int i = 0; i < replications; ++i) {
        try {
            out.push_back(
                run_replication(config, base_seed + static_cast<std::uint64_t>(i), paradigm));
        } catch (const std::exception& e) {
            throw Error("replication " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

std::vector<ReplicationResult> run_batch(const ScenarioConfig& config, Paradigm paradigm,
                                         std::uint64_t base_seed, int replications,
                                         int threads) {
    const int nthreads = resolve_threads(threads);
    if (nthreads <= 1 || replications <= 1) {
        return run_batch_serial(config, paradigm, base_seed, replications);
    }

    std::vector<ReplicationResult> out(static_cast<std::size_t>(replications));
    std::vector<std::string> errors(static_cast<std::size_t>(replications));
    bool failed = false;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (int i = 0; i < replications; ++i) {
        try {
            out[static_cast<std::size_t>(i)] =
                run_replication(config, base_seed + static_cast<std::uint64_t>(i), paradigm);
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(i)] = e.what();
            failed = true;
        }
    }

    if (failed) {
        for (std::size_t i = 0; i < errors.size(); ++i) {
            if (!errors[i].empty()) {
                throw Error("replication " + std::to_string(i) + ": " + errors[i]);
            }
        }
    }
    return out;
}

Sample pooled_sample(const std::vector<ReplicationResult>& batch, WaitingMetric metric,
                     ComparisonUnit unit, const std::string& label) {
    Sample s;
    s.label = label;
    if (unit == ComparisonUnit::Replication) {
        for (const ReplicationResult& r : batch) {
            if (const auto m = replication_mean_wait(r)) s.values.push_back(*m);
        }
        return s;
    }
    for (const ReplicationResult& r : batch) {
        if (metric == WaitingMetric::PerCustomerTotal) {
            s.values.insert(s.values.end(), r.waiting_time_sample.begin(),
                            r.waiting_time_sample.end());
        } else {
            for (const auto& q : r.per_queue_samples) {
                s.values.insert(s.values.end(), q.begin(), q.end());
            }
        }
    }
    return s;
}

bool ValidationBlock::any_reject_or_different() const {
    const auto mw_reject = [](const std::optional<MannWhitneyResult>& r) {
        return r && r->reject_null;
    };
    const auto var_diff = [](const std::optional<VarianceComparison>& v) {
        return v && !v->similar;
    };
    return mw_reject(mw_des_vs_reference) || mw_reject(mw_abs_vs_reference) ||
           mw_reject(mw_des_vs_abs) || var_diff(var_des_vs_reference) ||
           var_diff(var_abs_vs_reference);
}

const ParadigmResults* ExperimentReport::results_for(Paradigm p) const {
    for (const auto& pr : paradigms) {
        if (pr.paradigm == p) return &pr;
    }
    return nullptr;
}

ExperimentReport run_experiment(const ExperimentSpec& spec, std::optional<Sample> reference,
                                RawBatches* raw_out) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();

    if (!reference && spec.reference_sample_path) {
        reference = load_reference_sample(*spec.reference_sample_path);
    }

    ExperimentReport report;
    report.artifact_version = kArtifactVersion;
    report.timestamp = utc_timestamp();
    report.spec = spec;
    report.reference = std::move(reference);

    for (Paradigm p : spec.paradigms) {
        auto batch =
            run_batch(spec.scenario, p, spec.base_seed, spec.replications, spec.threads);
        report.paradigms.push_back(summarize_batch(p, batch, spec));
        if (raw_out) raw_out->emplace_back(p, std::move(batch));
    }

    const ParadigmResults* des = report.results_for(Paradigm::DES);
    const ParadigmResults* abs = report.results_for(Paradigm::ABS);

    if (report.reference && report.reference->size() >= 1) {
        const Sample& ref = *report.reference;
        const auto run_tests = [&](const ParadigmResults& pr,
                                   std::optional<MannWhitneyResult>& mw,
                                   std::optional<VarianceComparison>& var) {
            if (pr.pooled.values.empty()) return;
            mw = mann_whitney_u(pr.pooled, ref, spec.alpha);
            if (pr.pooled.size() >= 2 && ref.size() >= 2) {
                var = variance_comparison(pr.pooled, ref, spec.variance_threshold_percent);
            }
        };
        if (des) run_tests(*des, report.validation.mw_des_vs_reference,
                           report.validation.var_des_vs_reference);
        if (abs) run_tests(*abs, report.validation.mw_abs_vs_reference,
                           report.validation.var_abs_vs_reference);
    }
    if (des && abs && !des->pooled.values.empty() && !abs->pooled.values.empty()) {
        report.validation.mw_des_vs_abs = mann_whitney_u(des->pooled, abs->pooled, spec.alpha);
    }

    report.total_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

Sample synthetic_reference_sample(const ScenarioConfig& config, std::uint64_t base_seed) {
    // Held-out seed, outside the base_seed + index range used by replications.
    const std::uint64_t seed = base_seed ^ 0x9E3779B97F4A7C15ULL;
    const ReplicationResult day = run_des_replication(config, seed);
    return Sample{day.waiting_time_sample, "synthetic_reference"};
}

CalibrationOutcome calibrate(const CalibrationTargets& targets, double tolerance,
                             int max_iterations, int replications, std::uint64_t seed,
                             int threads) {
    const auto& f = targets.workload_fractions;
    if (!(targets.mean_wait > 0.0)) {
        throw CalibrationFailed("target mean_wait must be > 0");
    }
    if (!(tolerance > 0.0)) {
        throw CalibrationFailed("tolerance must be > 0");
    }
    const double fsum = f[0] + f[1] + f[2];
    if (std::fabs(fsum - 1.0) > 1e-9 || f[0] < 0.0 || f[1] < 0.0 || f[2] < 0.0) {
        throw CalibrationFailed("workload fractions must be nonnegative and sum to 1");
    }
    if (!(f[0] > 0.0) || !(f[2] > 0.0)) {
        throw CalibrationFailed("jobs 1 and 3 happen for every customer; their target "
                                "fractions must be positive");
    }

    ScenarioConfig cfg;  // calibrated defaults as the starting shape
    cfg.per_garment_service_minutes = 0.0;
    cfg.help_probability = 0.10;
    if (!(f[1] > 0.0)) {
        throw CalibrationFailed("help path is enabled (help_probability 0.1) but the job-2 "
                                "target fraction is zero");
    }

    // Step 1: service means from the workload ratios, anchored at one minute
    // for job 1.
    const double anchor = 1.0;
    const double mean1 = anchor;
    const double mean3 = anchor * f[2] / f[0];
    const double mean2 = anchor * f[1] / f[0] / cfg.help_probability;
    cfg.job1_service = Distribution::exponential(1.0 / mean1);
    cfg.job2_service = Distribution::exponential(1.0 / mean2);
    cfg.job3_service = Distribution::exponential(1.0 / mean3);

    // Step 2: bisect the arrival rate against the simulated mean wait.
    const double lambda_max = 0.999 / cfg.expected_service_minutes();
    double lo = lambda_max * 1e-4;
    double hi = lambda_max * 0.99;

    int evaluations = 0;
    double best_lambda = lo;
    double best_err = std::numeric_limits<double>::infinity();
    double best_wait = 0.0;

    const auto evaluate = [&](double lambda) {
        cfg.arrival_rate = lambda;
        const auto batch = run_batch(cfg, Paradigm::DES, seed, replications, threads);
        const Sample pooled = pooled_sample(batch, WaitingMetric::PerCustomerTotal,
                                            ComparisonUnit::Customer, "calibration");
        ++evaluations;
        const double wait = pooled.values.empty() ? 0.0 : sample_mean(pooled);
        const double err = std::fabs(wait - targets.mean_wait);
        if (err < best_err) {
            best_err = err;
            best_lambda = lambda;
            best_wait = wait;
        }
        return wait;
    };

    const double wait_lo = evaluate(lo);
    const double wait_hi = evaluate(hi);
    if (wait_lo > targets.mean_wait + tolerance || wait_hi < targets.mean_wait - tolerance) {
        std::ostringstream msg;
        msg << "target mean wait " << targets.mean_wait
            << " is outside the reachable range [" << wait_lo << ", " << wait_hi << "]";
        throw CalibrationFailed(msg.str());
    }

    while (best_err > tolerance) {
        if (evaluations >= max_iterations) {
            std::ostringstream msg;
            msg << "no convergence after " << evaluations << " evaluations; best candidate "
                << "arrival_rate=" << best_lambda << " with mean wait " << best_wait;
            throw CalibrationFailed(msg.str());
        }
        const double mid = 0.5 * (lo + hi);
        const double wait = evaluate(mid);
        if (wait < targets.mean_wait) {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    cfg.arrival_rate = best_lambda;

    // Realized workload split at the found rate.
    const auto batch = run_batch(cfg, Paradigm::DES, seed, replications, threads);
    std::array<double, 3> fraction_sum{};
    int fraction_reps = 0;
    for (const auto& r : batch) {
        try {
            const auto fr = workload_fractions(r);
            for (int j = 0; j < 3; ++j) fraction_sum[j] += fr[j];
            ++fraction_reps;
        } catch (const NoBusyTime&) {
        }
    }
    if (fraction_reps == 0) {
        throw CalibrationFailed("calibrated system never kept the staff busy");
    }

    CalibrationOutcome outcome;
    outcome.config = cfg;
    outcome.achieved_mean_wait = best_wait;
    outcome.achieved_fractions = {fraction_sum[0] / fraction_reps,
                                  fraction_sum[1] / fraction_reps,
                                  fraction_sum[2] / fraction_reps};
    outcome.evaluations = evaluations;
    return outcome;
}

}  // namespace fitsim
