// Command-line front end: batch experiment runs, standalone validation of
// sample files, and scenario calibration.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "fitsim/experiment.hpp"
#include "fitsim/report_io.hpp"

namespace {

using namespace fitsim;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitRejected = 2;

void print_paradigm_summary(const ParadigmResults& pr) {
    std::cout << "  " << to_string(pr.paradigm) << ": " << pr.replications.size()
              << " replications";
    if (pr.pooled_stats) {
        const auto& d = *pr.pooled_stats;
        std::cout << ", pooled n=" << d.count << std::fixed << std::setprecision(4)
                  << ", mean wait " << d.mean << " min, median " << d.median << ", variance "
                  << d.variance;
        std::cout.unsetf(std::ios::floatfield);
    } else {
        std::cout << ", no completed customers (statistics absent)";
    }
    std::cout << '\n';
    if (pr.mean_workload_fractions) {
        const auto& f = *pr.mean_workload_fractions;
        std::cout << "      workload split " << std::fixed << std::setprecision(3) << f[0]
                  << " / " << f[1] << " / " << f[2] << '\n';
        std::cout.unsetf(std::ios::floatfield);
    }
}

void print_validation(const ExperimentReport& report) {
    const auto& v = report.validation;
    if (!v.any_present()) {
        std::cout << "validation: not run (no reference sample, single paradigm)\n";
        return;
    }
    const auto mw_line = [](const char* name, const std::optional<MannWhitneyResult>& r) {
        if (r) std::cout << "  " << name << ": " << mw_verdict_line(*r) << '\n';
    };
    const auto var_line = [](const char* name, const std::optional<VarianceComparison>& r) {
        if (r) {
            std::cout << "  " << name << ": " << std::fixed << std::setprecision(1)
                      << r->percent_difference << "% difference, " << r->verdict() << '\n';
            std::cout.unsetf(std::ios::floatfield);
        }
    };
    std::cout << "validation (test 1, Mann-Whitney):\n";
    mw_line("des vs reference", v.mw_des_vs_reference);
    mw_line("abs vs reference", v.mw_abs_vs_reference);
    mw_line("des vs abs", v.mw_des_vs_abs);
    std::cout << "validation (test 2, variance):\n";
    var_line("des vs reference", v.var_des_vs_reference);
    var_line("abs vs reference", v.var_abs_vs_reference);
}

void export_samples(const RawBatches& raw, const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& [paradigm, batch] : raw) {
        for (std::size_t i = 0; i < batch.size(); ++i) {
            std::ostringstream name;
            name << to_string(paradigm) << "_rep" << std::setw(3) << std::setfill('0') << i
                 << ".csv";
            const auto path = std::filesystem::path(dir) / name.str();
            std::ofstream out(path, std::ios::binary);
            if (!out) throw IoError("cannot write '" + path.string() + "'");
            write_waiting_sample_csv(batch[i], out);
        }
    }
}

int cmd_run(const std::string& config_path, int reps, std::int64_t seed,
            const std::string& paradigm, const std::string& unit,
            const std::string& out_path, const std::string& samples_dir,
            const std::string& csv_path, const std::string& svg_path, int threads,
            bool synthetic_reference) {
    ExperimentSpec spec = load_config(config_path);
    if (reps > 0) spec.replications = reps;
    if (seed >= 0) spec.base_seed = static_cast<std::uint64_t>(seed);
    if (threads >= 0) spec.threads = threads;
    if (paradigm == "des") spec.paradigms = {Paradigm::DES};
    else if (paradigm == "abs") spec.paradigms = {Paradigm::ABS};
    else if (paradigm == "both") spec.paradigms = {Paradigm::DES, Paradigm::ABS};
    else if (!paradigm.empty()) throw ValidationError("unknown paradigm '" + paradigm + "'");
    if (unit == "customer") spec.comparison_unit = ComparisonUnit::Customer;
    else if (unit == "replication") spec.comparison_unit = ComparisonUnit::Replication;
    else if (!unit.empty()) throw ValidationError("unknown comparison unit '" + unit + "'");

    std::optional<Sample> reference;
    if (synthetic_reference) {
        reference = synthetic_reference_sample(spec.scenario, spec.base_seed);
        std::cout << "synthetic reference: one held-out day, " << reference->size()
                  << " customers\n";
    }

    RawBatches raw;
    const ExperimentReport report =
        run_experiment(spec, std::move(reference), samples_dir.empty() ? nullptr : &raw);

    for (const auto& pr : report.paradigms) print_paradigm_summary(pr);
    print_validation(report);

    if (!out_path.empty()) {
        emit_report(report, ReportFormat::Json, out_path);
        std::cout << "report written to " << out_path << '\n';
    }
    if (!csv_path.empty()) emit_report(report, ReportFormat::Csv, csv_path);
    if (!svg_path.empty()) emit_report(report, ReportFormat::SvgHistogram, svg_path);
    if (!samples_dir.empty()) {
        export_samples(raw, samples_dir);
        std::cout << "per-customer samples written to " << samples_dir << '\n';
    }

    return report.validation.any_reject_or_different() ? kExitRejected : kExitOk;
}

int cmd_validate(const std::string& model_path, const std::string& reference_path,
                 double alpha, double threshold) {
    const Sample model = load_reference_sample(model_path);
    const Sample reference = load_reference_sample(reference_path);

    const auto mw = mann_whitney_u(model, reference, alpha);
    std::cout << "test 1 (Mann-Whitney, medians): " << mw_verdict_line(mw) << '\n';

    const auto vc = variance_comparison(model, reference, threshold);
    std::cout << "test 2 (variance): model " << vc.variance_model << " vs reference "
              << vc.variance_reference << ": " << std::fixed << std::setprecision(1)
              << vc.percent_difference << "% difference, " << vc.verdict() << '\n';

    return (mw.reject_null || !vc.similar) ? kExitRejected : kExitOk;
}

int cmd_calibrate(double target_mean_wait, std::vector<double> workloads, double tolerance,
                  int reps, std::int64_t seed, int max_iterations, int threads,
                  const std::string& out_path) {
    CalibrationTargets targets;
    targets.mean_wait = target_mean_wait;
    if (!workloads.empty()) {
        if (workloads.size() != 3) {
            throw ValidationError("--workloads needs exactly three fractions");
        }
        targets.workload_fractions = {workloads[0], workloads[1], workloads[2]};
    }
    const std::uint64_t cal_seed =
        seed >= 0 ? static_cast<std::uint64_t>(seed) : ExperimentSpec{}.base_seed;
    const auto outcome = calibrate(targets, tolerance, max_iterations, reps, cal_seed,
                                   threads >= 0 ? threads : 0);

    std::cout << std::fixed << std::setprecision(6);
    std::cout << "arrival_rate        " << outcome.config.arrival_rate << "\n"
              << "achieved mean wait  " << outcome.achieved_mean_wait << " min (target "
              << targets.mean_wait << " +- " << tolerance << ")\n"
              << "achieved workloads  " << outcome.achieved_fractions[0] << " / "
              << outcome.achieved_fractions[1] << " / " << outcome.achieved_fractions[2]
              << "\n"
              << "evaluations         " << outcome.evaluations << "\n";
    std::cout.unsetf(std::ios::floatfield);

    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw IoError("cannot write '" + out_path + "'");
        out << scenario_to_config_json(outcome.config);
        std::cout << "config written to " << out_path << '\n';
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fitting-room queue simulator and validation harness"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run a replication experiment from a config file");
    std::string config_path, paradigm, unit, out_path, samples_dir, csv_path, svg_path;
    int reps = -1, threads = -1;
    std::int64_t seed = -1;
    bool synthetic_reference = false;
    run->add_option("--config", config_path, "experiment config (JSON)")->required();
    run->add_option("--reps", reps, "override replication count");
    run->add_option("--seed", seed, "override base seed");
    run->add_option("--paradigm", paradigm, "des|abs|both");
    run->add_option("--unit", unit, "validation sample unit: customer|replication");
    run->add_option("--out", out_path, "write the full JSON report here");
    run->add_option("--samples", samples_dir, "directory for per-customer wait CSVs");
    run->add_option("--csv", csv_path, "write the summary table (model,mean,std_dev,variance)");
    run->add_option("--svg", svg_path, "write the overlaid waiting-time histogram");
    run->add_option("--threads", threads, "replication workers (0 = all processors)");
    run->add_flag("--synthetic-reference", synthetic_reference,
                  "validate against a held-out simulated day instead of a file");

    // validate
    auto* validate = app.add_subcommand("validate", "compare two waiting-time sample files");
    std::string model_path, reference_path;
    double alpha = 0.05, threshold = 10.0;
    validate->add_option("--model-samples", model_path, "model waiting times (CSV)")
        ->required();
    validate->add_option("--reference", reference_path, "reference waiting times (CSV)")
        ->required();
    validate->add_option("--alpha", alpha, "significance level for test 1");
    validate->add_option("--threshold", threshold, "similarity threshold (%) for test 2");

    // calibrate
    auto* cal = app.add_subcommand("calibrate", "fit scenario rates to target metrics");
    double target_mean_wait = 1.68, tolerance = 0.05;
    std::vector<double> workloads;
    int cal_reps = 100, max_iterations = 48, cal_threads = -1;
    std::int64_t cal_seed = -1;
    std::string cal_out;
    cal->add_option("--target-mean-wait", target_mean_wait, "target mean wait (minutes)");
    cal->add_option("--workloads", workloads, "job workload fractions, e.g. 0.45,0.10,0.45")
        ->delimiter(',');
    cal->add_option("--tolerance", tolerance, "acceptable mean-wait error (minutes)");
    cal->add_option("--reps", cal_reps, "replications per evaluation");
    cal->add_option("--seed", cal_seed, "seed for the evaluation runs");
    cal->add_option("--max-iterations", max_iterations, "evaluation budget");
    cal->add_option("--threads", cal_threads, "replication workers");
    cal->add_option("--out", cal_out, "write the calibrated config here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(run)) {
            return cmd_run(config_path, reps, seed, paradigm, unit, out_path, samples_dir,
                           csv_path, svg_path, threads, synthetic_reference);
        }
        if (app.got_subcommand(validate)) {
            return cmd_validate(model_path, reference_path, alpha, threshold);
        }
        if (app.got_subcommand(cal)) {
            return cmd_calibrate(target_mean_wait, workloads, tolerance, cal_reps, cal_seed,
                                 max_iterations, cal_threads, cal_out);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
