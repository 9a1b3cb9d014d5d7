#include <chrono>

#include "world.hpp"

namespace fitsim {

namespace {

using detail::SweepScheduler;
using detail::World;

// Process-flow engine: arrivals, queue joins, fitting delays and service
// completions are plain events; staff dispatch happens in deferred sweeps.
class DesEngine {
public:
    DesEngine(World& world, EventCalendar& cal)
        : world_(world), cal_(cal), sweep_(cal, [this]() { dispatch(); }) {}

    void start() {
        if (!world_.config().has_arrivals()) return;
        const double first = world_.next_interarrival();
        if (first < world_.config().horizon_minutes) {
            cal_.schedule(first, [this]() { arrival(); });
        }
    }

private:
    void arrival() {
        const int cid = world_.new_customer(cal_.clock());
        world_.join_queue(QueueId::Entry, cid);
        sweep_.request();
        const double next = cal_.clock() + world_.next_interarrival();
        if (next < world_.config().horizon_minutes) {
            cal_.schedule(next, [this]() { arrival(); });
        }
    }

    void dispatch() {
        while (true) {
            const int s = world_.first_idle_staff();
            if (s < 0) return;
            const auto q = world_.select_job();
            if (!q) return;
            const auto assignment = world_.begin_service(s, *q);
            cal_.schedule(cal_.clock() + assignment.duration, [this, s]() { complete(s); });
        }
    }

    void complete(int staff_index) {
        const auto done = world_.finish_service(staff_index);
        switch (done.job) {
            case StaffJob::CountAndCard: {
                const double fitting = world_.customer(done.customer).fitting;
                cal_.schedule(cal_.clock() + fitting,
                              [this, cid = done.customer]() { fitting_end(cid); });
                break;
            }
            case StaffJob::Help:
                // Resumed fitting after help takes no extra time.
                world_.join_queue(QueueId::Return, done.customer);
                break;
            case StaffJob::ReceiveReturn:
                world_.depart(done.customer);
                break;
        }
        sweep_.request();
    }

    void fitting_end(int cid) {
        world_.join_queue(world_.customer(cid).wants_help ? QueueId::Help : QueueId::Return,
                          cid);
        sweep_.request();
    }

    World& world_;
    EventCalendar& cal_;
    SweepScheduler sweep_;
};

}  // namespace

ReplicationResult run_des_replication(const ScenarioConfig& config, std::uint64_t seed) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    EventCalendar cal;
    World world(config, cal, seed);
    DesEngine engine(world, cal);
    engine.start();

    SimTime elapsed = config.horizon_minutes;
    if (config.close_policy == ClosePolicy::FinishInSystem) {
        cal.run_all();
        elapsed = std::max(cal.clock(), config.horizon_minutes);
    } else {
        cal.run_until(config.horizon_minutes);
    }

    ReplicationResult result = world.finalize(Paradigm::DES, elapsed);
    result.run_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

}  // namespace fitsim
