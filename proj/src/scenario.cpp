#include "fitsim/scenario.hpp"

#include <cmath>

namespace fitsim {

void ScenarioConfig::validate() const {
    if (!(arrival_rate >= 0.0) || !std::isfinite(arrival_rate)) {
        throw InvalidConfig("arrival_rate must be >= 0");
    }
    if (interarrival && !(interarrival->mean() > 0.0)) {
        throw InvalidConfig("interarrival must have a positive mean");
    }
    if (!(help_probability >= 0.0 && help_probability <= 1.0)) {
        throw InvalidConfig("help_probability must lie in [0, 1]");
    }
    if (!(horizon_minutes > 0.0) || !std::isfinite(horizon_minutes)) {
        throw InvalidConfig("horizon_minutes must be > 0");
    }
    if (staff_count < 1) {
        throw InvalidConfig("staff_count must be >= 1");
    }
    if (!(per_garment_service_minutes >= 0.0)) {
        throw InvalidConfig("per_garment_service_minutes must be >= 0");
    }
}

double ScenarioConfig::effective_arrival_rate() const {
    return interarrival ? 1.0 / interarrival->mean() : arrival_rate;
}

double ScenarioConfig::expected_service_minutes() const {
    const double garments = garment_count.mean();
    return job1_service.mean() + per_garment_service_minutes * garments +
           help_probability * job2_service.mean() + job3_service.mean() +
           per_garment_service_minutes * garments;
}

double ScenarioConfig::offered_load() const {
    return effective_arrival_rate() * expected_service_minutes() /
           static_cast<double>(staff_count);
}

ScenarioConfig ScenarioConfig::calibrated_default() {
    return ScenarioConfig{};
}

ScenarioConfig ScenarioConfig::mm1_degenerate(double lambda, double mu) {
    ScenarioConfig cfg;
    cfg.arrival_rate = lambda;
    cfg.job1_service = Distribution::exponential(mu);
    cfg.job2_service = Distribution::deterministic(0.0);
    cfg.job3_service = Distribution::deterministic(0.0);
    cfg.fitting_duration = Distribution::deterministic(0.0);
    cfg.help_probability = 0.0;
    cfg.per_garment_service_minutes = 0.0;
    cfg.job_selection_policy = JobSelectionPolicy::FixedPriority;
    return cfg;
}

bool identical_outcome(const ReplicationResult& a, const ReplicationResult& b) {
    auto rows_equal = [](const CustomerWaitRow& x, const CustomerWaitRow& y) {
        return x.customer_id == y.customer_id && x.arrival_time == y.arrival_time &&
               x.total_wait == y.total_wait && x.entry_wait == y.entry_wait &&
               x.help_wait == y.help_wait && x.return_wait == y.return_wait;
    };
    if (a.seed != b.seed || a.paradigm != b.paradigm) return false;
    if (a.customers_arrived != b.customers_arrived ||
        a.customers_completed != b.customers_completed ||
        a.in_system_at_close != b.in_system_at_close)
        return false;
    if (a.waiting_time_sample != b.waiting_time_sample) return false;
    if (a.customer_rows.size() != b.customer_rows.size()) return false;
    for (std::size_t i = 0; i < a.customer_rows.size(); ++i) {
        if (!rows_equal(a.customer_rows[i], b.customer_rows[i])) return false;
    }
    if (a.per_queue_samples != b.per_queue_samples) return false;
    if (a.staff_busy_minutes_by_job != b.staff_busy_minutes_by_job) return false;
    if (a.join_order != b.join_order || a.start_order != b.start_order) return false;
    if (a.queue_integral_by_queue != b.queue_integral_by_queue) return false;
    if (a.queue_integral_total != b.queue_integral_total) return false;
    if (a.elapsed_minutes != b.elapsed_minutes) return false;
    if (a.stability_warning != b.stability_warning) return false;
    return true;
}

std::array<double, 3> workload_fractions(const ReplicationResult& result) {
    const auto& busy = result.staff_busy_minutes_by_job;
    const double total = busy[0] + busy[1] + busy[2];
    if (!(total > 0.0)) {
        throw NoBusyTime("staff accumulated no busy time");
    }
    return {busy[0] / total, busy[1] / total, busy[2] / total};
}

std::optional<QueueId> staff_select_next_job(
    const std::array<std::optional<SimTime>, 3>& head_join, JobSelectionPolicy policy) {
    static constexpr QueueId kPriority[3] = {QueueId::Return, QueueId::Entry, QueueId::Help};
    if (policy == JobSelectionPolicy::FixedPriority) {
        for (QueueId q : kPriority) {
            if (head_join[static_cast<int>(q)]) return q;
        }
        return std::nullopt;
    }
    std::optional<QueueId> best;
    SimTime best_join = 0.0;
    for (QueueId q : kPriority) {  // priority order makes ties fall to Return first
        const auto& join = head_join[static_cast<int>(q)];
        if (!join) continue;
        if (!best || *join < best_join) {
            best = q;
            best_join = *join;
        }
    }
    return best;
}

ReplicationResult run_replication(const ScenarioConfig& config, std::uint64_t seed,
                                  Paradigm paradigm) {
    return paradigm == Paradigm::DES ? run_des_replication(config, seed)
                                     : run_abs_replication(config, seed);
}

const char* to_string(Paradigm p) { return p == Paradigm::DES ? "des" : "abs"; }

const char* to_string(QueueId q) {
    switch (q) {
        case QueueId::Entry: return "entry";
        case QueueId::Help: return "help";
        case QueueId::Return: return "return";
    }
    return "?";
}

}  // namespace fitsim
