#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include "fitsim/agents.hpp"

using namespace fitsim;

namespace {

StateChart two_state_timeout_chart(double delay) {
    StateChart chart;
    chart.add_state("A");
    chart.add_state("B");
    chart.set_initial("A");
    chart.on_timeout("A", "B", delay);
    return chart;
}

}  // namespace

TEST_CASE("single timeout transition fires at its deadline") {
    EventCalendar cal;
    Population pop(cal);
    const auto chart = two_state_timeout_chart(5.0);
    const AgentId id = pop.spawn(chart);
    cal.run_until(10.0);
    CHECK(pop.agent(id).state_name() == "B");
    REQUIRE(pop.transition_log().size() == 2);  // spawn + timeout
    CHECK(pop.transition_log()[1].time == 5.0);
    CHECK(pop.transition_log()[1].from_state == "A");
    CHECK(pop.transition_log()[1].to_state == "B");
}

TEST_CASE("an agent without transitions stays in its initial state") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("Only");
    chart.set_initial("Only");
    const AgentId id = pop.spawn(chart);
    cal.run_until(100.0);
    CHECK(pop.agent(id).state_name() == "Only");
    CHECK(pop.transition_log().size() == 1);  // just the spawn record
}

TEST_CASE("invalid charts are rejected at spawn") {
    EventCalendar cal;
    Population pop(cal);

    StateChart undeclared_initial;
    undeclared_initial.add_state("A");
    undeclared_initial.set_initial("Nowhere");
    CHECK_THROWS_AS(pop.spawn(undeclared_initial), InvalidChart);

    StateChart no_initial;
    no_initial.add_state("A");
    CHECK_THROWS_AS(pop.spawn(no_initial), InvalidChart);

    StateChart chart;
    chart.add_state("A");
    CHECK_THROWS_AS(chart.on_timeout("A", "Missing", 1.0), InvalidChart);
    CHECK_THROWS_AS(chart.on_message("Missing", "A", "tag"), InvalidChart);

    chart.add_state("B");
    chart.on_timeout("A", "B", 1.0);
    CHECK_THROWS_AS(chart.on_timeout("A", "B", 2.0), InvalidChart);  // second timeout
}

TEST_CASE("message transition fires at delivery time") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("WaitHelp");
    chart.add_state("BeingHelped");
    chart.set_initial("WaitHelp");
    chart.on_message("WaitHelp", "BeingHelped", "staff_ready");
    const AgentId id = pop.spawn(chart);

    pop.send_message(Message{"staff_ready", -1, id, {}}, 7.0);
    cal.run_until(6.999);
    CHECK(pop.agent(id).state_name() == "WaitHelp");
    cal.run_until(10.0);
    CHECK(pop.agent(id).state_name() == "BeingHelped");
    CHECK(pop.agent(id).entered_at == 7.0);
}

TEST_CASE("messages without a matching transition are dropped and logged") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("InFittingRoom");
    chart.set_initial("InFittingRoom");
    const AgentId id = pop.spawn(chart);

    pop.send_message(Message{"staff_ready", -1, id, {}}, 3.0);
    cal.run_until(10.0);
    CHECK(pop.agent(id).state_name() == "InFittingRoom");
    REQUIRE(pop.dropped_messages().size() == 1);
    CHECK(pop.dropped_messages()[0].message.tag == "staff_ready");
}

TEST_CASE("a matching message preempts the pending timeout") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("Waiting");
    chart.add_state("TimedOut");
    chart.add_state("Served");
    chart.set_initial("Waiting");
    chart.on_timeout("Waiting", "TimedOut", 9.0);
    chart.on_message("Waiting", "Served", "go");
    const AgentId id = pop.spawn(chart);

    pop.send_message(Message{"go", -1, id, {}}, 7.0);
    cal.run_until(20.0);
    CHECK(pop.agent(id).state_name() == "Served");
    CHECK(pop.timeout_firings() == 0);  // disarmed timeouts never fire
}

TEST_CASE("message arriving exactly at the timeout instant loses to it") {
    // The timeout was scheduled first, so it fires first; the message then
    // finds no matching transition and is dropped.
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("Waiting");
    chart.add_state("TimedOut");
    chart.add_state("Served");
    chart.set_initial("Waiting");
    chart.on_timeout("Waiting", "TimedOut", 9.0);
    chart.on_message("Waiting", "Served", "go");
    const AgentId id = pop.spawn(chart);
    pop.send_message(Message{"go", -1, id, {}}, 9.0);
    cal.run_until(20.0);
    CHECK(pop.agent(id).state_name() == "TimedOut");
    CHECK(pop.dropped_messages().size() == 1);
}

TEST_CASE("every preempted timeout stays silent") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("W");
    chart.add_state("T");
    chart.add_state("S");
    chart.set_initial("W");
    chart.on_timeout("W", "T", 5.0);
    chart.on_message("W", "S", "go");
    std::vector<AgentId> ids;
    for (int i = 0; i < 50; ++i) ids.push_back(pop.spawn(chart));
    for (AgentId id : ids) pop.send_message(Message{"go", -1, id, {}}, 4.0);
    cal.run_until(100.0);
    CHECK(pop.timeout_firings() == 0);
    for (AgentId id : ids) CHECK(pop.agent(id).state_name() == "S");
}

TEST_CASE("notify_guards fires condition transitions to a fixed point") {
    EventCalendar cal;
    Population pop(cal);
    bool queue_nonempty = false;

    StateChart staff;
    staff.add_state("Idle");
    staff.add_state("Serving");
    staff.set_initial("Idle");
    staff.on_condition(
        "Idle", "Serving", "queue_nonempty",
        [&](const AgentContext&) { return queue_nonempty; },
        [&](AgentContext&) { queue_nonempty = false; });  // takes the customer

    const AgentId id = pop.spawn(staff);
    CHECK(pop.notify_guards() == 0);  // nothing to do yet
    CHECK(pop.agent(id).state_name() == "Idle");

    queue_nonempty = true;
    CHECK(pop.notify_guards() == 1);
    CHECK(pop.agent(id).state_name() == "Serving");
}

TEST_CASE("mutually enabling guards overflow the sweep cap") {
    EventCalendar cal;
    Population pop(cal, 100);
    StateChart ping;
    ping.add_state("X");
    ping.add_state("Y");
    ping.set_initial("X");
    ping.on_condition("X", "Y", "always", [](const AgentContext&) { return true; });
    ping.on_condition("Y", "X", "always", [](const AgentContext&) { return true; });
    pop.spawn(ping);
    pop.spawn(ping);
    CHECK_THROWS_AS(pop.notify_guards(), GuardCascadeOverflow);
}

TEST_CASE("guard evaluation order is ascending agent id") {
    EventCalendar cal;
    Population pop(cal);
    std::vector<AgentId> firing_order;
    StateChart chart;
    chart.add_state("A");
    chart.add_state("B");
    chart.set_initial("A");
    chart.on_condition(
        "A", "B", "always", [](const AgentContext&) { return true; },
        [&](AgentContext& ctx) { firing_order.push_back(ctx.agent.id); });
    const AgentId a = pop.spawn(chart);
    const AgentId b = pop.spawn(chart);
    const AgentId c = pop.spawn(chart);
    pop.notify_guards();
    CHECK(firing_order == std::vector<AgentId>{a, b, c});
}

TEST_CASE("agent count is conserved across spawn and despawn") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("S");
    chart.set_initial("S");
    std::vector<AgentId> ids;
    for (int i = 0; i < 10; ++i) ids.push_back(pop.spawn(chart));
    pop.despawn(ids[3]);
    pop.despawn(ids[7]);
    CHECK(pop.spawned_count() == 10);
    CHECK(pop.despawned_count() == 2);
    CHECK(pop.live_count() == 8);
    CHECK(pop.spawned_count() - pop.despawned_count() == pop.live_count());
    CHECK_FALSE(pop.alive(ids[3]));
}

TEST_CASE("transition log is a connected path per agent") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("A");
    chart.add_state("B");
    chart.add_state("C");
    chart.set_initial("A");
    chart.on_timeout("A", "B", 1.0);
    chart.on_timeout("B", "C", 1.0);
    chart.on_timeout("C", "A", 1.0);
    const AgentId id = pop.spawn(chart);
    cal.run_until(10.0);

    std::string at;
    for (const auto& rec : pop.transition_log()) {
        if (rec.agent != id) continue;
        if (!rec.from_state.empty()) CHECK(rec.from_state == at);
        at = rec.to_state;
    }
    CHECK(at == pop.agent(id).state_name());
}

TEST_CASE("identical runs produce identical transition logs") {
    auto run_log = []() {
        EventCalendar cal;
        Population pop(cal);
        StateChart chart;
        chart.add_state("A");
        chart.add_state("B");
        chart.set_initial("A");
        chart.on_timeout("A", "B", 2.5);
        chart.on_message("B", "A", "reset");
        const AgentId id = pop.spawn(chart);
        pop.send_message(Message{"reset", -1, id, {}}, 4.0);
        pop.send_message(Message{"reset", -1, id, {}}, 5.0);  // dropped, state A
        cal.run_until(10.0);
        std::ostringstream out;
        pop.write_transition_log_csv(out);
        return out.str();
    };
    CHECK(run_log() == run_log());
}

TEST_CASE("transition log CSV carries the documented columns") {
    EventCalendar cal;
    Population pop(cal);
    const auto chart = two_state_timeout_chart(1.5);
    pop.spawn(chart);
    cal.run_until(2.0);
    std::ostringstream out;
    pop.write_transition_log_csv(out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "time,agent_id,from_state,to_state,trigger");
    std::getline(in, line);
    CHECK(line == "0.000000,0,,A,spawn");
    std::getline(in, line);
    CHECK(line == "1.500000,0,A,B,timeout");
}

TEST_CASE("messages to despawned agents are dropped with a reason") {
    EventCalendar cal;
    Population pop(cal);
    StateChart chart;
    chart.add_state("S");
    chart.set_initial("S");
    const AgentId id = pop.spawn(chart);
    pop.send_message(Message{"hello", -1, id, {}}, 1.0);
    pop.despawn(id);
    cal.run_until(2.0);
    REQUIRE(pop.dropped_messages().size() == 1);
    CHECK(pop.dropped_messages()[0].reason == "recipient not alive");
}
