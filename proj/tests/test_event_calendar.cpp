#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fitsim/event_calendar.hpp"

using namespace fitsim;

TEST_CASE("events execute in fire-time order regardless of scheduling order") {
    EventCalendar cal;
    std::vector<int> order;
    cal.schedule(3.0, [&]() { order.push_back(3); });
    cal.schedule(1.0, [&]() { order.push_back(1); });
    cal.schedule(2.0, [&]() { order.push_back(2); });
    cal.run_until(10.0);
    CHECK(order == std::vector<int>{1, 2, 3});
    CHECK(cal.clock() == 10.0);
}

TEST_CASE("equal-time events execute in insertion order") {
    EventCalendar cal;
    std::vector<char> order;
    cal.schedule(5.0, [&]() { order.push_back('A'); });
    cal.schedule(5.0, [&]() { order.push_back('B'); });
    cal.run_until(5.0);
    CHECK(order == std::vector<char>{'A', 'B'});
}

TEST_CASE("scheduling before the clock is rejected") {
    EventCalendar cal;
    cal.run_until(10.0);
    CHECK_THROWS_AS(cal.schedule(9.0, []() {}), SchedulingInPast);
    CHECK_NOTHROW(cal.schedule(10.0, []() {}));  // same instant is fine
}

TEST_CASE("run_until on an empty calendar just advances the clock") {
    EventCalendar cal;
    CHECK(cal.run_until(480.0) == 0);
    CHECK(cal.clock() == 480.0);
}

TEST_CASE("run_until boundary is inclusive") {
    EventCalendar cal;
    int fired = 0;
    for (double t : {1.0, 2.0, 3.0}) {
        cal.schedule(t, [&]() { ++fired; });
    }
    CHECK(cal.run_until(2.0) == 2);
    CHECK(fired == 2);
    CHECK(cal.pending() == 1);
}

TEST_CASE("self-scheduling chain") {
    EventCalendar cal;
    std::function<void()> step = [&]() {
        if (cal.clock() + 1.0 <= 6.0) {
            cal.schedule(cal.clock() + 1.0, step);
        }
    };
    cal.schedule(1.0, step);
    CHECK(cal.run_until(5.0) == 5);
    CHECK(cal.pending() == 1);  // the event at t=6 is still waiting
}

TEST_CASE("cancelled events never execute") {
    EventCalendar cal;
    int fired = 0;
    auto h = cal.schedule(2.0, [&]() { ++fired; });
    cal.schedule(1.0, [&]() { ++fired; });
    CHECK(cal.cancel(h));
    CHECK_FALSE(cal.cancel(h));  // already gone
    cal.run_until(10.0);
    CHECK(fired == 1);
}

TEST_CASE("run_all drains and leaves the clock at the last event") {
    EventCalendar cal;
    cal.schedule(7.5, []() {});
    cal.schedule(3.0, []() {});
    CHECK(cal.run_all() == 2);
    CHECK(cal.clock() == 7.5);
}

TEST_CASE("low-class events run after every same-instant normal event") {
    EventCalendar cal;
    std::vector<std::string> order;
    cal.schedule(
        1.0, [&]() { order.push_back("low"); }, EventClass::Low);
    cal.schedule(1.0, [&]() {
        order.push_back("normal");
        // a normal event scheduled *now* still beats the pending low one
        cal.schedule(1.0, [&]() { order.push_back("late-normal"); });
    });
    cal.run_until(1.0);
    CHECK(order == std::vector<std::string>{"normal", "late-normal", "low"});
}

TEST_CASE("executed fire times are nondecreasing and replays are identical") {
    std::mt19937 gen(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto run_once = [](std::vector<double>& log, unsigned seed) {
            EventCalendar c;
            std::mt19937 g(seed);
            double frontier = 0.0;
            for (int i = 0; i < 200; ++i) {
                const double t =
                    frontier + std::uniform_real_distribution<double>(0.0, 10.0)(g);
                c.schedule(t, [&log, &c]() { log.push_back(c.clock()); });
                if (i % 50 == 49) {
                    c.run_until(frontier + 5.0);
                    frontier = c.clock();
                }
            }
            c.run_all();
        };
        std::vector<double> executed, executed_again;
        const unsigned seed = gen();
        run_once(executed, seed);
        run_once(executed_again, seed);
        CHECK(std::is_sorted(executed.begin(), executed.end()));
        CHECK(executed == executed_again);
    }
}
