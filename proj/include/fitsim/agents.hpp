#pragma once

#include <any>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "fitsim/event_calendar.hpp"

namespace fitsim {

class Population;
struct AgentInstance;
struct Message;

// Passed to every guard, action and duration callback.
struct AgentContext {
    Population& population;
    AgentInstance& agent;
    SimTime now;
    const Message* message = nullptr;  // set for message-triggered actions
};

using AgentAction = std::function<void(AgentContext&)>;
using GuardFn = std::function<bool(const AgentContext&)>;
using DurationFn = std::function<SimTime(const AgentContext&)>;

struct TimeoutTrigger {
    DurationFn duration;
};
struct MessageTrigger {
    std::string tag;
};
struct ConditionTrigger {
    std::string name;
    GuardFn guard;
};
using Trigger = std::variant<TimeoutTrigger, MessageTrigger, ConditionTrigger>;

struct Transition {
    std::string source;
    std::string target;
    Trigger trigger;
    AgentAction action;  // may be empty
};

// Declarative behaviour description shared by any number of agents.
// A state may own at most one timeout transition; it is armed on entry and
// disarmed on exit. A transition fires as: disarm, transition action, state
// change, entry action of the target, arm the target's timeout.
class StateChart {
public:
    void add_state(const std::string& name, AgentAction entry_action = {});
    void set_initial(const std::string& name);

    void add_transition(Transition t);

    // convenience builders
    void on_timeout(const std::string& from, const std::string& to,
                    double delay, AgentAction action = {});
    void on_timeout(const std::string& from, const std::string& to,
                    DurationFn duration, AgentAction action = {});
    void on_message(const std::string& from, const std::string& to,
                    const std::string& tag, AgentAction action = {});
    void on_condition(const std::string& from, const std::string& to,
                      const std::string& guard_name, GuardFn guard,
                      AgentAction action = {});

    // Throws InvalidChart unless every transition endpoint and the initial
    // state are declared and no state has two timeout transitions.
    void validate() const;

    int state_index(const std::string& name) const;  // -1 if unknown
    const std::string& state_name(int index) const { return states_[index].name; }
    std::size_t state_count() const { return states_.size(); }

private:
    friend class Population;
    struct StateDef {
        std::string name;
        AgentAction entry;
        std::optional<std::size_t> timeout_transition;
        std::vector<std::size_t> message_transitions;
        std::vector<std::size_t> condition_transitions;
    };
    std::vector<StateDef> states_;
    std::vector<Transition> transitions_;
    std::string initial_name_;
};

using AgentId = std::int64_t;

struct Message {
    std::string tag;
    AgentId sender = -1;
    AgentId recipient = -1;
    std::any payload;
};

struct AgentInstance {
    AgentId id = -1;
    const StateChart* chart = nullptr;
    int state = -1;
    SimTime entered_at = 0.0;
    std::any attributes;  // scenario-owned

    const std::string& state_name() const { return chart->state_name(state); }

private:
    friend class Population;
    EventHandle timeout_;
};

struct TransitionRecord {
    SimTime time;
    AgentId agent;
    std::string from_state;
    std::string to_state;
    std::string trigger;
};

struct DroppedMessage {
    SimTime time;
    Message message;
    std::string reason;
};

// A population of live agents sharing one event calendar. Message delivery
// and timeouts run through calendar events; condition transitions fire only
// inside notify_guards(), which loops to a fixed point in ascending agent id
// order (capped, GuardCascadeOverflow beyond the cap).
class Population {
public:
    explicit Population(EventCalendar& calendar, int guard_sweep_cap = 10000);

    AgentId spawn(const StateChart& chart, std::any attributes = {});
    void despawn(AgentId id);
    bool alive(AgentId id) const;
    AgentInstance& agent(AgentId id);

    // Delivery at time `at`: fires the recipient's matching message
    // transition, or drops the message with a logged reason.
    void send_message(Message msg, SimTime at);

    // Returns the number of condition transitions fired.
    int notify_guards();

    // Schedules notify_guards() as a Low event at the current clock time,
    // at most one per timestamp. All same-instant state changes settle first.
    void request_guard_sweep();

    EventCalendar& calendar() { return cal_; }

    std::size_t spawned_count() const { return spawned_; }
    std::size_t despawned_count() const { return despawned_; }
    std::size_t live_count() const { return agents_.size(); }
    std::size_t timeout_firings() const { return timeout_firings_; }

    const std::vector<TransitionRecord>& transition_log() const { return log_; }
    const std::vector<DroppedMessage>& dropped_messages() const { return dropped_; }

    // CSV columns: time,agent_id,from_state,to_state,trigger
    void write_transition_log_csv(std::ostream& out) const;

private:
    void fire(AgentInstance& ag, std::size_t transition_index, const Message* msg,
              const std::string& trigger_desc);
    void arm_timeout(AgentInstance& ag);
    void deliver(const Message& msg);

    EventCalendar& cal_;
    int guard_cap_;
    std::map<AgentId, std::unique_ptr<AgentInstance>> agents_;
    AgentId next_id_ = 0;
    std::size_t spawned_ = 0;
    std::size_t despawned_ = 0;
    std::size_t timeout_firings_ = 0;
    bool sweep_pending_ = false;
    SimTime sweep_time_ = 0.0;
    std::vector<TransitionRecord> log_;
    std::vector<DroppedMessage> dropped_;
};

}  // namespace fitsim
