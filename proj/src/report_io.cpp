#include "fitsim/report_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace fitsim {

namespace {

using nlohmann::json;

// ---------------------------------------------------------------------------
// JSON <-> domain enums

std::string to_key(Paradigm p) { return to_string(p); }

Paradigm paradigm_from(const std::string& s, const std::string& ctx) {
    if (s == "des") return Paradigm::DES;
    if (s == "abs") return Paradigm::ABS;
    throw ValidationError(ctx + ": unknown paradigm '" + s + "'");
}

std::string to_key(ClosePolicy p) {
    return p == ClosePolicy::FinishInSystem ? "finish_in_system" : "hard_cut";
}

ClosePolicy close_policy_from(const std::string& s, const std::string& ctx) {
    if (s == "finish_in_system") return ClosePolicy::FinishInSystem;
    if (s == "hard_cut") return ClosePolicy::HardCut;
    throw ValidationError(ctx + ": unknown close_policy '" + s + "'");
}

std::string to_key(JobSelectionPolicy p) {
    return p == JobSelectionPolicy::GlobalFifo ? "global_fifo" : "fixed_priority";
}

JobSelectionPolicy job_policy_from(const std::string& s, const std::string& ctx) {
    if (s == "global_fifo") return JobSelectionPolicy::GlobalFifo;
    if (s == "fixed_priority") return JobSelectionPolicy::FixedPriority;
    throw ValidationError(ctx + ": unknown job_selection_policy '" + s + "'");
}

std::string to_key(WaitingMetric m) {
    return m == WaitingMetric::PerCustomerTotal ? "per_customer_total" : "per_queue";
}

WaitingMetric waiting_metric_from(const std::string& s, const std::string& ctx) {
    if (s == "per_customer_total") return WaitingMetric::PerCustomerTotal;
    if (s == "per_queue") return WaitingMetric::PerQueue;
    throw ValidationError(ctx + ": unknown waiting_metric '" + s + "'");
}

std::string to_key(ComparisonUnit u) {
    return u == ComparisonUnit::Customer ? "customer" : "replication";
}

ComparisonUnit unit_from(const std::string& s, const std::string& ctx) {
    if (s == "customer") return ComparisonUnit::Customer;
    if (s == "replication") return ComparisonUnit::Replication;
    throw ValidationError(ctx + ": unknown comparison_unit '" + s + "'");
}

// ---------------------------------------------------------------------------
// schema plumbing

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
    for (const auto& [key, _] : obj.items()) {
        if (std::find_if(allowed.begin(), allowed.end(),
                         [&](const char* k) { return key == k; }) == allowed.end()) {
            throw ValidationError("unknown key '" + key + "' in " + ctx);
        }
    }
}

double require_number(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ValidationError(ctx + " must be a number");
    return j.get<double>();
}

std::string require_string(const json& j, const std::string& ctx) {
    if (!j.is_string()) throw ValidationError(ctx + " must be a string");
    return j.get<std::string>();
}

json dist_to_json(const Distribution& d) {
    switch (d.kind()) {
        case Distribution::Kind::Exponential:
            return json{{"type", "exponential"}, {"rate", d.param()}};
        case Distribution::Kind::Deterministic:
            return json{{"type", "deterministic"}, {"value", d.param()}};
        case Distribution::Kind::Geometric:
            return json{{"type", "geometric"}, {"p", d.param()}};
    }
    return {};
}

Distribution dist_from_json(const json& j, const std::string& ctx) {
    if (!j.is_object()) throw ValidationError(ctx + " must be an object");
    if (!j.contains("type")) throw ValidationError(ctx + " needs a 'type'");
    const std::string type = require_string(j.at("type"), ctx + ".type");
    try {
        if (type == "exponential") {
            check_keys(j, {"type", "rate"}, ctx);
            if (!j.contains("rate")) throw ValidationError(ctx + " needs a 'rate'");
            return Distribution::exponential(require_number(j.at("rate"), ctx + ".rate"));
        }
        if (type == "deterministic") {
            check_keys(j, {"type", "value"}, ctx);
            if (!j.contains("value")) throw ValidationError(ctx + " needs a 'value'");
            return Distribution::deterministic(require_number(j.at("value"), ctx + ".value"));
        }
        if (type == "geometric") {
            check_keys(j, {"type", "p"}, ctx);
            if (!j.contains("p")) throw ValidationError(ctx + " needs a 'p'");
            return Distribution::geometric(require_number(j.at("p"), ctx + ".p"));
        }
    } catch (const InvalidDistributionParameter& e) {
        throw ValidationError(ctx + ": " + e.what());
    }
    throw ValidationError(ctx + ": unknown distribution type '" + type + "'");
}

json scenario_to_json(const ScenarioConfig& c) {
    return json{
        {"arrival_rate", c.arrival_rate},
        {"interarrival", c.interarrival ? dist_to_json(*c.interarrival) : json(nullptr)},
        {"job1_service", dist_to_json(c.job1_service)},
        {"job2_service", dist_to_json(c.job2_service)},
        {"job3_service", dist_to_json(c.job3_service)},
        {"fitting_duration", dist_to_json(c.fitting_duration)},
        {"help_probability", c.help_probability},
        {"garment_count", dist_to_json(c.garment_count)},
        {"per_garment_service_minutes", c.per_garment_service_minutes},
        {"staff_count", c.staff_count},
        {"horizon_minutes", c.horizon_minutes},
        {"close_policy", to_key(c.close_policy)},
        {"job_selection_policy", to_key(c.job_selection_policy)},
        {"waiting_metric", to_key(c.waiting_metric)},
    };
}

ScenarioConfig scenario_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("scenario must be an object");
    check_keys(j,
               {"arrival_rate", "interarrival", "job1_service", "job2_service",
                "job3_service", "fitting_duration", "help_probability", "garment_count",
                "per_garment_service_minutes", "staff_count", "horizon_minutes",
                "close_policy", "job_selection_policy", "waiting_metric"},
               "scenario");
    ScenarioConfig c = ScenarioConfig::calibrated_default();
    if (j.contains("arrival_rate")) {
        c.arrival_rate = require_number(j.at("arrival_rate"), "scenario.arrival_rate");
    }
    if (j.contains("interarrival") && !j.at("interarrival").is_null()) {
        c.interarrival = dist_from_json(j.at("interarrival"), "scenario.interarrival");
    }
    if (j.contains("job1_service")) {
        c.job1_service = dist_from_json(j.at("job1_service"), "scenario.job1_service");
    }
    if (j.contains("job2_service")) {
        c.job2_service = dist_from_json(j.at("job2_service"), "scenario.job2_service");
    }
    if (j.contains("job3_service")) {
        c.job3_service = dist_from_json(j.at("job3_service"), "scenario.job3_service");
    }
    if (j.contains("fitting_duration")) {
        c.fitting_duration = dist_from_json(j.at("fitting_duration"), "scenario.fitting_duration");
    }
    if (j.contains("help_probability")) {
        c.help_probability = require_number(j.at("help_probability"), "scenario.help_probability");
    }
    if (j.contains("garment_count")) {
        c.garment_count = dist_from_json(j.at("garment_count"), "scenario.garment_count");
    }
    if (j.contains("per_garment_service_minutes")) {
        c.per_garment_service_minutes = require_number(
            j.at("per_garment_service_minutes"), "scenario.per_garment_service_minutes");
    }
    if (j.contains("staff_count")) {
        if (!j.at("staff_count").is_number_integer()) {
            throw ValidationError("scenario.staff_count must be an integer");
        }
        c.staff_count = j.at("staff_count").get<int>();
    }
    if (j.contains("horizon_minutes")) {
        c.horizon_minutes = require_number(j.at("horizon_minutes"), "scenario.horizon_minutes");
    }
    if (j.contains("close_policy")) {
        c.close_policy = close_policy_from(
            require_string(j.at("close_policy"), "scenario.close_policy"), "scenario");
    }
    if (j.contains("job_selection_policy")) {
        c.job_selection_policy = job_policy_from(
            require_string(j.at("job_selection_policy"), "scenario.job_selection_policy"),
            "scenario");
    }
    if (j.contains("waiting_metric")) {
        c.waiting_metric = waiting_metric_from(
            require_string(j.at("waiting_metric"), "scenario.waiting_metric"), "scenario");
    }
    try {
        c.validate();
    } catch (const InvalidConfig& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    return c;
}

json spec_to_json(const ExperimentSpec& s) {
    json paradigms = json::array();
    for (Paradigm p : s.paradigms) paradigms.push_back(to_key(p));
    return json{
        {"scenario", scenario_to_json(s.scenario)},
        {"replications", s.replications},
        {"base_seed", s.base_seed},
        {"paradigms", paradigms},
        {"reference_sample_path",
         s.reference_sample_path ? json(*s.reference_sample_path) : json(nullptr)},
        {"alpha", s.alpha},
        {"variance_threshold_percent", s.variance_threshold_percent},
        {"comparison_unit", to_key(s.comparison_unit)},
        {"histogram_bin_width", s.histogram_bin_width},
        {"threads", s.threads},
    };
}

ExperimentSpec spec_from_json(const json& j) {
    if (!j.is_object()) throw ValidationError("config root must be an object");
    check_keys(j,
               {"scenario", "replications", "base_seed", "paradigms",
                "reference_sample_path", "alpha", "variance_threshold_percent",
                "comparison_unit", "histogram_bin_width", "threads"},
               "config");
    ExperimentSpec s;
    if (j.contains("scenario")) s.scenario = scenario_from_json(j.at("scenario"));
    if (j.contains("replications")) {
        if (!j.at("replications").is_number_integer()) {
            throw ValidationError("replications must be an integer");
        }
        s.replications = j.at("replications").get<int>();
    }
    if (j.contains("base_seed")) {
        if (!j.at("base_seed").is_number_integer()) {
            throw ValidationError("base_seed must be an integer");
        }
        s.base_seed = j.at("base_seed").get<std::uint64_t>();
    }
    if (j.contains("paradigms")) {
        if (!j.at("paradigms").is_array() || j.at("paradigms").empty()) {
            throw ValidationError("paradigms must be a non-empty array");
        }
        s.paradigms.clear();
        for (const auto& p : j.at("paradigms")) {
            s.paradigms.push_back(paradigm_from(require_string(p, "paradigms[]"), "paradigms"));
        }
    }
    if (j.contains("reference_sample_path") && !j.at("reference_sample_path").is_null()) {
        s.reference_sample_path =
            require_string(j.at("reference_sample_path"), "reference_sample_path");
    }
    if (j.contains("alpha")) s.alpha = require_number(j.at("alpha"), "alpha");
    if (j.contains("variance_threshold_percent")) {
        s.variance_threshold_percent =
            require_number(j.at("variance_threshold_percent"), "variance_threshold_percent");
    }
    if (j.contains("comparison_unit")) {
        s.comparison_unit = unit_from(
            require_string(j.at("comparison_unit"), "comparison_unit"), "comparison_unit");
    }
    if (j.contains("histogram_bin_width")) {
        s.histogram_bin_width = require_number(j.at("histogram_bin_width"), "histogram_bin_width");
    }
    if (j.contains("threads")) {
        if (!j.at("threads").is_number_integer()) {
            throw ValidationError("threads must be an integer");
        }
        s.threads = j.at("threads").get<int>();
    }
    try {
        s.validate();
    } catch (const InvalidConfig& e) {
        throw ValidationError(e.what());
    }
    return s;
}

// ---------------------------------------------------------------------------
// report serialization

json optional_number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json stats_to_json(const DescriptiveStats& d) {
    return json{{"count", d.count},   {"mean", d.mean},       {"median", d.median},
                {"variance", d.variance}, {"std_dev", d.std_dev}};
}

DescriptiveStats stats_from_json(const json& j) {
    DescriptiveStats d;
    d.count = j.at("count").get<std::size_t>();
    d.mean = j.at("mean").get<double>();
    d.median = j.at("median").get<double>();
    d.variance = j.at("variance").get<double>();
    d.std_dev = j.at("std_dev").get<double>();
    return d;
}

json mw_to_json(const MannWhitneyResult& r) {
    return json{
        {"u_statistic", r.u_statistic},
        {"method", r.method == MWMethod::ExactPermutation ? "exact_permutation"
                                                          : "normal_approximation"},
        {"z", optional_number(r.z)},
        {"p_two_sided", r.p_two_sided},
        {"alpha", r.alpha},
        {"reject_null", r.reject_null},
        {"degenerate", r.degenerate},
        {"n1", r.n1},
        {"n2", r.n2},
        {"verdict", mw_verdict_line(r)},
    };
}

MannWhitneyResult mw_from_json(const json& j) {
    MannWhitneyResult r;
    r.u_statistic = j.at("u_statistic").get<double>();
    r.method = j.at("method").get<std::string>() == "exact_permutation"
                   ? MWMethod::ExactPermutation
                   : MWMethod::NormalApproximation;
    r.z = j.at("z").is_null() ? std::numeric_limits<double>::quiet_NaN()
                              : j.at("z").get<double>();
    r.p_two_sided = j.at("p_two_sided").get<double>();
    r.alpha = j.at("alpha").get<double>();
    r.reject_null = j.at("reject_null").get<bool>();
    r.degenerate = j.at("degenerate").get<bool>();
    r.n1 = j.at("n1").get<std::size_t>();
    r.n2 = j.at("n2").get<std::size_t>();
    return r;
}

json vc_to_json(const VarianceComparison& v) {
    return json{
        {"variance_model", v.variance_model},
        {"variance_reference", v.variance_reference},
        {"percent_difference", v.percent_difference},
        {"threshold_percent", v.similarity_threshold},
        {"verdict", v.verdict()},
    };
}

VarianceComparison vc_from_json(const json& j) {
    VarianceComparison v;
    v.variance_model = j.at("variance_model").get<double>();
    v.variance_reference = j.at("variance_reference").get<double>();
    v.percent_difference = j.at("percent_difference").get<double>();
    v.similarity_threshold = j.at("threshold_percent").get<double>();
    v.similar = j.at("verdict").get<std::string>() == "similar";
    return v;
}

json histogram_to_json(const std::vector<HistogramBin>& bins, double bin_width) {
    json arr = json::array();
    for (const auto& b : bins) {
        arr.push_back(json{{"lower", b.lower}, {"upper", b.upper}, {"count", b.count}});
    }
    return json{{"bin_width", bin_width}, {"origin", 0.0}, {"bins", arr}};
}

std::vector<HistogramBin> histogram_from_json(const json& j) {
    std::vector<HistogramBin> bins;
    for (const auto& b : j.at("bins")) {
        bins.push_back(HistogramBin{b.at("lower").get<double>(), b.at("upper").get<double>(),
                                    b.at("count").get<std::size_t>()});
    }
    return bins;
}

json paradigm_results_to_json(const ParadigmResults& pr, double bin_width) {
    json reps = json::array();
    for (const auto& r : pr.replications) {
        reps.push_back(json{
            {"index", r.index},
            {"seed", r.seed},
            {"arrived", r.arrived},
            {"completed", r.completed},
            {"in_system_at_close", r.in_system_at_close},
            {"mean_wait", r.mean_wait ? json(*r.mean_wait) : json(nullptr)},
            {"busy_minutes", r.busy_minutes},
            {"elapsed_minutes", r.elapsed_minutes},
            {"stability_warning", r.stability_warning},
        });
    }
    return json{
        {"replications", reps},
        {"pooled_values", pr.pooled.values},
        {"pooled", pr.pooled_stats ? stats_to_json(*pr.pooled_stats) : json(nullptr)},
        {"workload_fractions",
         pr.mean_workload_fractions ? json(*pr.mean_workload_fractions) : json(nullptr)},
        {"histogram", histogram_to_json(pr.histogram, bin_width)},
    };
}

ParadigmResults paradigm_results_from_json(Paradigm p, const json& j) {
    ParadigmResults pr;
    pr.paradigm = p;
    for (const auto& r : j.at("replications")) {
        ReplicationSummary s;
        s.index = r.at("index").get<int>();
        s.seed = r.at("seed").get<std::uint64_t>();
        s.arrived = r.at("arrived").get<long>();
        s.completed = r.at("completed").get<long>();
        s.in_system_at_close = r.at("in_system_at_close").get<long>();
        if (!r.at("mean_wait").is_null()) s.mean_wait = r.at("mean_wait").get<double>();
        s.busy_minutes = r.at("busy_minutes").get<std::array<double, 3>>();
        s.elapsed_minutes = r.at("elapsed_minutes").get<double>();
        s.stability_warning = r.at("stability_warning").get<bool>();
        pr.replications.push_back(s);
    }
    pr.pooled.values = j.at("pooled_values").get<std::vector<double>>();
    pr.pooled.label = to_string(p);
    if (!j.at("pooled").is_null()) pr.pooled_stats = stats_from_json(j.at("pooled"));
    if (!j.at("workload_fractions").is_null()) {
        pr.mean_workload_fractions = j.at("workload_fractions").get<std::array<double, 3>>();
    }
    pr.histogram = histogram_from_json(j.at("histogram"));
    return pr;
}

json report_to_json(const ExperimentReport& report) {
    json paradigms = json::object();
    for (const auto& pr : report.paradigms) {
        paradigms[to_key(pr.paradigm)] =
            paradigm_results_to_json(pr, report.spec.histogram_bin_width);
    }
    json reference(nullptr);
    if (report.reference) {
        reference = json{{"label", report.reference->label},
                         {"count", report.reference->size()},
                         {"values", report.reference->values}};
    }
    const auto& v = report.validation;
    json validation{
        {"mann_whitney",
         json{{"des_vs_reference",
               v.mw_des_vs_reference ? mw_to_json(*v.mw_des_vs_reference) : json(nullptr)},
              {"abs_vs_reference",
               v.mw_abs_vs_reference ? mw_to_json(*v.mw_abs_vs_reference) : json(nullptr)},
              {"des_vs_abs", v.mw_des_vs_abs ? mw_to_json(*v.mw_des_vs_abs) : json(nullptr)}}},
        {"variance",
         json{{"des_vs_reference",
               v.var_des_vs_reference ? vc_to_json(*v.var_des_vs_reference) : json(nullptr)},
              {"abs_vs_reference",
               v.var_abs_vs_reference ? vc_to_json(*v.var_abs_vs_reference) : json(nullptr)}}},
    };
    return json{
        {"artifact", json{{"name", "fitsim"}, {"version", report.artifact_version}}},
        {"timestamp", report.timestamp},
        {"timing", json{{"total_wall_seconds", report.total_wall_seconds}}},
        {"spec", spec_to_json(report.spec)},
        {"reference", reference},
        {"paradigms", paradigms},
        {"validation", validation},
    };
}

ExperimentReport report_from_json(const json& j) {
    ExperimentReport report;
    report.artifact_version = j.at("artifact").at("version").get<std::string>();
    report.timestamp = j.at("timestamp").get<std::string>();
    report.total_wall_seconds = j.at("timing").at("total_wall_seconds").get<double>();
    report.spec = spec_from_json(j.at("spec"));
    if (!j.at("reference").is_null()) {
        Sample ref;
        ref.label = j.at("reference").at("label").get<std::string>();
        ref.values = j.at("reference").at("values").get<std::vector<double>>();
        report.reference = std::move(ref);
    }
    for (const auto& [key, value] : j.at("paradigms").items()) {
        report.paradigms.push_back(
            paradigm_results_from_json(paradigm_from(key, "paradigms"), value));
    }
    const json& mw = j.at("validation").at("mann_whitney");
    const json& var = j.at("validation").at("variance");
    auto& v = report.validation;
    if (!mw.at("des_vs_reference").is_null()) {
        v.mw_des_vs_reference = mw_from_json(mw.at("des_vs_reference"));
    }
    if (!mw.at("abs_vs_reference").is_null()) {
        v.mw_abs_vs_reference = mw_from_json(mw.at("abs_vs_reference"));
    }
    if (!mw.at("des_vs_abs").is_null()) v.mw_des_vs_abs = mw_from_json(mw.at("des_vs_abs"));
    if (!var.at("des_vs_reference").is_null()) {
        v.var_des_vs_reference = vc_from_json(var.at("des_vs_reference"));
    }
    if (!var.at("abs_vs_reference").is_null()) {
        v.var_abs_vs_reference = vc_from_json(var.at("abs_vs_reference"));
    }
    return report;
}

std::string read_file(const std::string& path, const char* what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(std::string("cannot read ") + what + " file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

// ---------------------------------------------------------------------------

ExperimentSpec load_config(const std::string& path) {
    const std::string text = read_file(path, "config");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("config '" + path + "': " + e.what());
    }
    return spec_from_json(j);
}

Sample load_reference_sample(const std::string& path) {
    const std::string text = read_file(path, "sample");
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ParseError("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto split = [](const std::string& s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(s);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        return cells;
    };
    const auto trim = [](std::string s) {
        const auto notspace = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), notspace));
        s.erase(std::find_if(s.rbegin(), s.rend(), notspace).base(), s.end());
        return s;
    };

    const auto header = split(line);
    int column = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (trim(header[i]) == "total_wait") column = static_cast<int>(i);
    }
    if (column < 0) throw ParseError("'" + path + "' has no total_wait column");

    Sample sample;
    sample.label = path;
    int row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (static_cast<std::size_t>(column) >= cells.size()) {
            throw ParseError("'" + path + "' row " + std::to_string(row) +
                             ": missing total_wait cell");
        }
        const std::string cell = trim(cells[static_cast<std::size_t>(column)]);
        double value = 0.0;
        try {
            std::size_t pos = 0;
            value = std::stod(cell, &pos);
            if (pos != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw ParseError("'" + path + "' row " + std::to_string(row) + ": '" + cell +
                             "' is not a number");
        }
        if (!std::isfinite(value)) {
            throw ParseError("'" + path + "' row " + std::to_string(row) +
                             ": value must be finite");
        }
        if (value < 0.0) {
            throw NegativeWaitingTime("'" + path + "' row " + std::to_string(row) + ": " +
                                      cell);
        }
        sample.values.push_back(value);
    }
    if (sample.values.empty()) throw ParseError("'" + path + "' has no data rows");
    return sample;
}

std::string report_to_json_string(const ExperimentReport& report) {
    return report_to_json(report).dump(2) + "\n";
}

ExperimentReport load_report(const std::string& path) {
    const std::string text = read_file(path, "report");
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("report '" + path + "': " + e.what());
    }
    return report_from_json(j);
}

bool reports_equivalent(const ExperimentReport& a, const ExperimentReport& b) {
    json ja = report_to_json(a);
    json jb = report_to_json(b);
    for (json* j : {&ja, &jb}) {
        j->erase("timestamp");
        j->erase("timing");
    }
    return ja.dump() == jb.dump();
}

void write_summary_csv(const ExperimentReport& report, std::ostream& out) {
    out << "model,mean,std_dev,variance\n";
    out << std::setprecision(10);
    if (report.reference && report.reference->size() >= 2) {
        const auto d = describe(*report.reference);
        out << "real_system," << d.mean << ',' << d.std_dev << ',' << d.variance << '\n';
    }
    for (const auto& pr : report.paradigms) {
        if (!pr.pooled_stats) continue;
        const auto& d = *pr.pooled_stats;
        out << to_key(pr.paradigm) << ',' << d.mean << ',' << d.std_dev << ',' << d.variance
            << '\n';
    }
}

void write_waiting_sample_csv(const ReplicationResult& result, std::ostream& out) {
    out << "customer_id,arrival_time,total_wait,entry_wait,help_wait,return_wait\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& row : result.customer_rows) {
        out << row.customer_id << ',' << row.arrival_time << ',' << row.total_wait << ','
            << row.entry_wait << ',' << row.help_wait << ',' << row.return_wait << '\n';
    }
}

void write_histogram_csv(const std::vector<HistogramBin>& bins, std::ostream& out) {
    out << "bin_start,bin_end,count\n";
    out << std::setprecision(10);
    for (const auto& b : bins) {
        out << b.lower << ',' << b.upper << ',' << b.count << '\n';
    }
}

void write_histogram_svg(const ExperimentReport& report, std::ostream& out) {
    struct Series {
        std::string label;
        std::string color;
        std::vector<HistogramBin> bins;
    };
    std::vector<Series> series;
    if (report.reference && !report.reference->values.empty()) {
        series.push_back(Series{"real system", "#7f7f7f",
                                histogram(*report.reference, report.spec.histogram_bin_width)});
    }
    for (const auto& pr : report.paradigms) {
        if (pr.histogram.empty()) continue;
        series.push_back(Series{to_key(pr.paradigm),
                                pr.paradigm == Paradigm::DES ? "#1f77b4" : "#ff7f0e",
                                pr.histogram});
    }

    const double width = 760, height = 420;
    const double left = 70, right = 30, top = 40, bottom = 60;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = 0.0, x_max = 1.0;
    std::size_t y_max = 1;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& b : s.bins) {
            if (first) {
                x_min = b.lower;
                x_max = b.upper;
                first = false;
            }
            x_min = std::min(x_min, b.lower);
            x_max = std::max(x_max, b.upper);
            y_max = std::max(y_max, b.count);
        }
    }
    if (x_max <= x_min) x_max = x_min + 1.0;

    const auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    const auto sy = [&](double count) {
        return top + plot_h - count / static_cast<double>(y_max) * plot_h;
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">"
        << "Waiting time frequency distribution</text>\n";

    for (const auto& s : series) {
        for (const auto& b : s.bins) {
            if (b.count == 0) continue;
            const double x = sx(b.lower);
            const double w = sx(b.upper) - x;
            const double y = sy(static_cast<double>(b.count));
            out << "<rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << w
                << "\" height=\"" << (top + plot_h - y) << "\" fill=\"" << s.color
                << "\" fill-opacity=\"0.45\"/>\n";
        }
    }

    // axes
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 5; ++t) {
        const double frac = t / 5.0;
        const double xv = x_min + frac * (x_max - x_min);
        const double yv = frac * static_cast<double>(y_max);
        out << "<text x=\"" << sx(xv) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << std::setprecision(3) << xv << "</text>\n";
        out << "<text x=\"" << left - 8 << "\" y=\"" << sy(yv) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << std::setprecision(4) << yv << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << "waiting time (minutes)</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << top + plot_h / 2 << ")\">customers</text>\n";

    double legend_y = top + 8;
    for (const auto& s : series) {
        out << "<rect x=\"" << left + plot_w - 130 << "\" y=\"" << legend_y - 10
            << "\" width=\"12\" height=\"12\" fill=\"" << s.color
            << "\" fill-opacity=\"0.6\"/>\n";
        out << "<text x=\"" << left + plot_w - 112 << "\" y=\"" << legend_y
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        legend_y += 18;
    }
    out << "</svg>\n";
}

void emit_report(const ExperimentReport& report, ReportFormat format,
                 const std::string& out_path) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + out_path + "'");
    switch (format) {
        case ReportFormat::Json: out << report_to_json_string(report); break;
        case ReportFormat::Csv: write_summary_csv(report, out); break;
        case ReportFormat::SvgHistogram: write_histogram_svg(report, out); break;
    }
    out.flush();
    if (!out) throw IoError("failed while writing '" + out_path + "'");
}

std::string scenario_to_config_json(const ScenarioConfig& config) {
    return json{{"scenario", scenario_to_json(config)}}.dump(2) + "\n";
}

}  // namespace fitsim
