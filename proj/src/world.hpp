#pragma once

#include <array>
#include <deque>
#include <optional>

#include "fitsim/event_calendar.hpp"
#include "fitsim/rng.hpp"
#include "fitsim/scenario.hpp"

namespace fitsim::detail {

struct StaffState {
    bool busy = false;
    StaffJob job = StaffJob::CountAndCard;
    int customer = -1;
    double duration = 0.0;  // of the service in progress
};

// Queue contents, staff occupancy, customer records and every statistic both
// model paradigms share. The kernels differ only in how they sequence calls
// into this class, which is exactly what keeps their outputs comparable
// under common random numbers.
class World {
public:
    World(const ScenarioConfig& config, EventCalendar& calendar, std::uint64_t seed);

    const ScenarioConfig& config() const { return config_; }
    EventCalendar& calendar() { return cal_; }

    // Consumes the arrival stream. Call exactly once per arrival slot.
    double next_interarrival();

    // Creates the customer record with all attribute draws taken now, one
    // per purpose stream, so draw i always belongs to customer i.
    int new_customer(SimTime arrival);
    Customer& customer(int id) { return customers_[static_cast<std::size_t>(id)]; }
    std::size_t customer_count() const { return customers_.size(); }

    void join_queue(QueueId q, int customer_id);
    bool queue_empty(QueueId q) const;
    std::array<std::optional<SimTime>, 3> queue_heads() const;
    std::optional<QueueId> select_job() const;

    int staff_count() const;
    int first_idle_staff() const;  // -1 when everyone is busy
    const StaffState& staff(int index) const { return staff_[static_cast<std::size_t>(index)]; }

    struct Assignment {
        int customer = -1;
        double duration = 0.0;
    };
    // Pops the head of `q`, records the service start and marks the staff
    // member busy.
    Assignment begin_service(int staff_index, QueueId q);

    struct Completion {
        int customer = -1;
        StaffJob job = StaffJob::CountAndCard;
    };
    // Books busy minutes and the stage-completion timestamp, frees the staff
    // member.
    Completion finish_service(int staff_index);

    void depart(int customer_id);

    // Seals queue-length integrals at `elapsed` and assembles the result.
    ReplicationResult finalize(Paradigm paradigm, SimTime elapsed);

private:
    void record_queue_change(QueueId q, int delta);

    const ScenarioConfig& config_;
    EventCalendar& cal_;
    std::uint64_t seed_;

    RngStream arrivals_;
    RngStream entry_service_;
    RngStream help_service_;
    RngStream return_service_;
    RngStream fitting_;
    RngStream help_decision_;
    RngStream garments_;

    std::vector<Customer> customers_;
    std::array<std::deque<int>, 3> queues_;
    std::vector<StaffState> staff_;

    long completed_ = 0;
    std::array<double, 3> busy_minutes_{};
    std::array<std::vector<double>, 3> queue_waits_;
    std::array<std::vector<int>, 3> join_order_;
    std::array<std::vector<int>, 3> start_order_;

    std::array<double, 3> queue_integral_{};
    std::array<int, 3> queue_len_{};
    std::array<SimTime, 3> queue_changed_at_{};
};

// Schedules a Low-class dispatch pass at the current instant, at most one
// per timestamp. Both kernels dispatch through this so every same-time queue
// join settles before any staff decision.
class SweepScheduler {
public:
    SweepScheduler(EventCalendar& cal, std::function<void()> dispatch)
        : cal_(cal), dispatch_(std::move(dispatch)) {}

    void request() {
        if (pending_ && pending_at_ == cal_.clock()) return;
        pending_ = true;
        pending_at_ = cal_.clock();
        cal_.schedule(
            cal_.clock(),
            [this]() {
                pending_ = false;
                dispatch_();
            },
            EventClass::Low);
    }

private:
    EventCalendar& cal_;
    std::function<void()> dispatch_;
    bool pending_ = false;
    SimTime pending_at_ = 0.0;
};

}  // namespace fitsim::detail
