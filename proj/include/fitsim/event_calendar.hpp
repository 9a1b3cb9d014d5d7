#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <vector>

#include "fitsim/errors.hpp"

namespace fitsim {

// Simulation time in minutes since run start.
using SimTime = double;

// Two scheduling classes at the same timestamp: Normal events model state
// changes; Low events run after every same-instant Normal event has fired.
// Resource dispatch uses Low so it always sees a settled world.
enum class EventClass : std::uint8_t { Normal = 0, Low = 1 };

// Handle returned by schedule(); permits cancellation.
class EventHandle {
public:
    EventHandle() = default;
    bool valid() const { return static_cast<bool>(state_); }

private:
    friend class EventCalendar;
    explicit EventHandle(std::shared_ptr<bool> state) : state_(std::move(state)) {}
    std::shared_ptr<bool> state_;  // true while the event is live
};

// Future-event list with a monotone clock. Pop order is nondecreasing in
// fire time; ties break by class, then by scheduling order (FIFO).
class EventCalendar {
public:
    using Action = std::function<void()>;

    SimTime clock() const { return clock_; }
    std::size_t pending() const { return live_; }

    EventHandle schedule(SimTime at, Action action,
                         EventClass klass = EventClass::Normal);

    // True if the event was still pending. Cancelled events never execute.
    bool cancel(EventHandle& handle);

    // Executes every live event with fire_time <= t_end, in order, then sets
    // the clock to t_end. Returns the number executed.
    std::size_t run_until(SimTime t_end);

    // Drains the calendar completely; the clock ends at the last executed
    // event's fire time (or stays put if nothing was pending).
    std::size_t run_all();

private:
    struct Entry {
        SimTime time;
        EventClass klass;
        std::uint64_t seq;
        Action action;
        std::shared_ptr<bool> live;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.time != b.time) return a.time > b.time;
            if (a.klass != b.klass) return a.klass > b.klass;
            return a.seq > b.seq;
        }
    };

    std::size_t run_loop(SimTime t_end, bool bounded);

    std::priority_queue<Entry, std::vector<Entry>, Later> pending_;
    SimTime clock_ = 0.0;
    std::uint64_t next_seq_ = 0;
    std::size_t live_ = 0;
};

}  // namespace fitsim
