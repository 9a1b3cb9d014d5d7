#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fitsim/agents.hpp"
#include "fitsim/event_calendar.hpp"
#include "fitsim/rng.hpp"

namespace fitsim {

// The three customer queues in front of the fitting room.
enum class QueueId : int { Entry = 0, Help = 1, Return = 2 };

// The three staff jobs: count garments and hand out the card, provide help,
// take back the card and unwanted garments.
enum class StaffJob : int { CountAndCard = 0, Help = 1, ReceiveReturn = 2 };

enum class Paradigm { DES, ABS };

enum class ClosePolicy { FinishInSystem, HardCut };
enum class JobSelectionPolicy { GlobalFifo, FixedPriority };
enum class WaitingMetric { PerCustomerTotal, PerQueue };

// One pseudo-random substream per replication and purpose, so both model
// paradigms hand customer i exactly the same draws (common random numbers).
enum class StreamPurpose : std::uint64_t {
    Arrivals = 0,
    EntryService = 1,
    HelpService = 2,
    ReturnService = 3,
    FittingDuration = 4,
    HelpDecision = 5,
    GarmentCount = 6,
};

struct ScenarioConfig {
    // Customers per minute, Poisson arrivals. The default is the value
    // calibrate() lands on for a 1.68-minute mean wait at a 45/10/45
    // workload split with the service defaults below.
    double arrival_rate = 0.19473663093750002;
    // Overrides the Poisson process when set (e.g. deterministic spacing).
    std::optional<Distribution> interarrival;
    Distribution job1_service = Distribution::exponential(1.0);
    Distribution job2_service = Distribution::exponential(0.45);
    Distribution job3_service = Distribution::exponential(1.0);
    Distribution fitting_duration = Distribution::exponential(0.2);
    double help_probability = 0.10;
    Distribution garment_count = Distribution::geometric(0.25);
    double per_garment_service_minutes = 0.0;  // optional add-on per garment for jobs 1 and 3
    int staff_count = 1;
    double horizon_minutes = 480.0;
    ClosePolicy close_policy = ClosePolicy::FinishInSystem;
    JobSelectionPolicy job_selection_policy = JobSelectionPolicy::GlobalFifo;
    WaitingMetric waiting_metric = WaitingMetric::PerCustomerTotal;

    void validate() const;  // throws InvalidConfig naming the offending field

    // arrival_rate, or the rate implied by the interarrival override.
    double effective_arrival_rate() const;
    bool has_arrivals() const { return effective_arrival_rate() > 0.0; }
    // Expected staff minutes one customer consumes across all jobs.
    double expected_service_minutes() const;
    // effective arrival rate * expected_service_minutes() / staff_count
    double offered_load() const;
    bool stable() const { return offered_load() < 1.0; }

    // Shipped defaults, found by `calibrate` against a mean customer wait of
    // 1.68 minutes with a 45/10/45 staff workload split.
    static ScenarioConfig calibrated_default();

    // Single M/M/1 station in disguise: no help, zero fitting time, zero
    // return handling. Return service gets fixed priority so the zero-length
    // return visit never waits behind a fresh entry service.
    static ScenarioConfig mm1_degenerate(double lambda, double mu);

    bool operator==(const ScenarioConfig&) const = default;
};

struct Customer {
    int id = -1;
    SimTime arrival = 0.0;
    int garments = 1;
    bool wants_help = false;

    // Durations drawn up front (per-garment increment already applied).
    double job1 = 0.0;
    double job2 = 0.0;
    double job3 = 0.0;
    double fitting = 0.0;

    // Stage timestamps; negative until reached.
    SimTime entry_join = -1.0, entry_start = -1.0, entry_done = -1.0;
    SimTime help_join = -1.0, help_start = -1.0, help_done = -1.0;
    SimTime return_join = -1.0, return_start = -1.0;
    SimTime depart = -1.0;

    bool completed() const { return depart >= 0.0; }
    double entry_wait() const { return entry_start >= 0.0 ? entry_start - entry_join : 0.0; }
    double help_wait() const { return help_start >= 0.0 ? help_start - help_join : 0.0; }
    double return_wait() const { return return_start >= 0.0 ? return_start - return_join : 0.0; }
    double total_wait() const { return entry_wait() + help_wait() + return_wait(); }
};

// Per-customer row used by the waiting-time sample export.
struct CustomerWaitRow {
    int customer_id = -1;
    double arrival_time = 0.0;
    double total_wait = 0.0;
    double entry_wait = 0.0;
    double help_wait = 0.0;
    double return_wait = 0.0;
};

struct ReplicationResult {
    std::uint64_t seed = 0;
    Paradigm paradigm = Paradigm::DES;

    long customers_arrived = 0;
    long customers_completed = 0;
    long in_system_at_close = 0;

    // Completed customers in id order.
    std::vector<double> waiting_time_sample;
    std::vector<CustomerWaitRow> customer_rows;

    // Waits per queue visit, in service-start order.
    std::array<std::vector<double>, 3> per_queue_samples;

    std::array<double, 3> staff_busy_minutes_by_job{};

    // Join and service-start orders per queue (customer ids), for FIFO checks.
    std::array<std::vector<int>, 3> join_order;
    std::array<std::vector<int>, 3> start_order;

    // Time-average bookkeeping: integral of queue length over [0, elapsed].
    std::array<double, 3> queue_integral_by_queue{};
    double queue_integral_total = 0.0;
    double elapsed_minutes = 0.0;  // horizon, or drain time when later

    bool stability_warning = false;
    double run_wall_seconds = 0.0;
};

// Field-by-field equality ignoring wall-clock time.
bool identical_outcome(const ReplicationResult& a, const ReplicationResult& b);

// Busy-time split across the three jobs; fractions sum to 1.
// Throws NoBusyTime when the staff never worked.
std::array<double, 3> workload_fractions(const ReplicationResult& result);

// Dispatch rule for an idle staff member. `head_join` holds the queue-join
// time of each queue's head customer (empty optional = empty queue).
// GlobalFifo serves the earliest head, ties and FixedPriority resolve as
// Return > Entry > Help.
std::optional<QueueId> staff_select_next_job(
    const std::array<std::optional<SimTime>, 3>& head_join, JobSelectionPolicy policy);

// One full day in the shop, process-flow style.
ReplicationResult run_des_replication(const ScenarioConfig& config, std::uint64_t seed);

// Same day, agent style: customer and staff state charts over the shared
// calendar. Pass `transition_log` to capture every state change.
ReplicationResult run_abs_replication(const ScenarioConfig& config, std::uint64_t seed,
                                      std::vector<TransitionRecord>* transition_log = nullptr);

ReplicationResult run_replication(const ScenarioConfig& config, std::uint64_t seed,
                                  Paradigm paradigm);

const char* to_string(Paradigm p);
const char* to_string(QueueId q);

}  // namespace fitsim
