#include "fitsim/event_calendar.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace fitsim {

EventHandle EventCalendar::schedule(SimTime at, Action action, EventClass klass) {
    if (std::isnan(at) || at < clock_) {
        throw SchedulingInPast("schedule at t=" + std::to_string(at) +
                               " but clock is t=" + std::to_string(clock_));
    }
    auto live = std::make_shared<bool>(true);
    pending_.push(Entry{at, klass, next_seq_++, std::move(action), live});
    ++live_;
    return EventHandle(live);
}

bool EventCalendar::cancel(EventHandle& handle) {
    if (!handle.state_ || !*handle.state_) return false;
    *handle.state_ = false;
    --live_;
    handle.state_.reset();
    return true;
}

std::size_t EventCalendar::run_loop(SimTime t_end, bool bounded) {
    std::size_t executed = 0;
    while (!pending_.empty()) {
        const Entry& top = pending_.top();
        if (bounded && top.time > t_end) break;
        if (!*top.live) {
            pending_.pop();
            continue;
        }
        // Pull the entry out before firing: the action may schedule or
        // cancel other events.
        Entry entry = top;
        pending_.pop();
        *entry.live = false;
        --live_;
        clock_ = entry.time;
        entry.action();
        ++executed;
    }
    return executed;
}

std::size_t EventCalendar::run_until(SimTime t_end) {
    if (std::isnan(t_end) || t_end < clock_) {
        throw SchedulingInPast("run_until t=" + std::to_string(t_end) +
                               " but clock is t=" + std::to_string(clock_));
    }
    const std::size_t executed = run_loop(t_end, true);
    clock_ = t_end;
    return executed;
}

std::size_t EventCalendar::run_all() {
    return run_loop(std::numeric_limits<SimTime>::infinity(), false);
}

}  // namespace fitsim
