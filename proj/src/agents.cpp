#include "fitsim/agents.hpp"

#include <iomanip>
#include <utility>

namespace fitsim {

void StateChart::add_state(const std::string& name, AgentAction entry_action) {
    if (state_index(name) >= 0) {
        throw InvalidChart("duplicate state '" + name + "'");
    }
    states_.push_back(StateDef{name, std::move(entry_action), {}, {}, {}});
}

void StateChart::set_initial(const std::string& name) {
    initial_name_ = name;
}

void StateChart::add_transition(Transition t) {
    const int src = state_index(t.source);
    const int dst = state_index(t.target);
    if (src < 0) throw InvalidChart("transition source '" + t.source + "' not declared");
    if (dst < 0) throw InvalidChart("transition target '" + t.target + "' not declared");
    const std::size_t index = transitions_.size();
    StateDef& state = states_[static_cast<std::size_t>(src)];
    if (std::holds_alternative<TimeoutTrigger>(t.trigger)) {
        if (state.timeout_transition) {
            throw InvalidChart("state '" + t.source + "' already has a timeout transition");
        }
        state.timeout_transition = index;
    } else if (std::holds_alternative<MessageTrigger>(t.trigger)) {
        state.message_transitions.push_back(index);
    } else {
        state.condition_transitions.push_back(index);
    }
    transitions_.push_back(std::move(t));
}

void StateChart::on_timeout(const std::string& from, const std::string& to,
                            double delay, AgentAction action) {
    on_timeout(from, to, DurationFn([delay](const AgentContext&) { return delay; }),
               std::move(action));
}

void StateChart::on_timeout(const std::string& from, const std::string& to,
                            DurationFn duration, AgentAction action) {
    add_transition(Transition{from, to, TimeoutTrigger{std::move(duration)},
                              std::move(action)});
}

void StateChart::on_message(const std::string& from, const std::string& to,
                            const std::string& tag, AgentAction action) {
    add_transition(Transition{from, to, MessageTrigger{tag}, std::move(action)});
}

void StateChart::on_condition(const std::string& from, const std::string& to,
                              const std::string& guard_name, GuardFn guard,
                              AgentAction action) {
    add_transition(Transition{from, to, ConditionTrigger{guard_name, std::move(guard)},
                              std::move(action)});
}

void StateChart::validate() const {
    if (states_.empty()) throw InvalidChart("chart has no states");
    if (initial_name_.empty()) throw InvalidChart("chart has no initial state");
    if (state_index(initial_name_) < 0) {
        throw InvalidChart("initial state '" + initial_name_ + "' not declared");
    }
}

int StateChart::state_index(const std::string& name) const {
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

Population::Population(EventCalendar& calendar, int guard_sweep_cap)
    : cal_(calendar), guard_cap_(guard_sweep_cap) {}

AgentId Population::spawn(const StateChart& chart, std::any attributes) {
    chart.validate();
    const AgentId id = next_id_++;
    auto ag = std::make_unique<AgentInstance>();
    ag->id = id;
    ag->chart = &chart;
    ag->state = chart.state_index(chart.initial_name_);
    ag->entered_at = cal_.clock();
    ag->attributes = std::move(attributes);
    AgentInstance& ref = *ag;
    agents_.emplace(id, std::move(ag));
    ++spawned_;
    log_.push_back(TransitionRecord{cal_.clock(), id, "", chart.initial_name_, "spawn"});

    const auto& init = chart.states_[static_cast<std::size_t>(ref.state)];
    if (init.entry) {
        AgentContext ctx{*this, ref, cal_.clock(), nullptr};
        init.entry(ctx);
    }
    if (alive(id)) arm_timeout(ref);
    return id;
}

void Population::despawn(AgentId id) {
    auto it = agents_.find(id);
    if (it == agents_.end()) return;
    cal_.cancel(it->second->timeout_);
    agents_.erase(it);
    ++despawned_;
}

bool Population::alive(AgentId id) const { return agents_.count(id) > 0; }

AgentInstance& Population::agent(AgentId id) {
    auto it = agents_.find(id);
    if (it == agents_.end()) throw Error("no live agent with id " + std::to_string(id));
    return *it->second;
}

void Population::send_message(Message msg, SimTime at) {
    if (at < cal_.clock()) {
        throw SchedulingInPast("message '" + msg.tag + "' scheduled in the past");
    }
    cal_.schedule(at, [this, m = std::move(msg)]() { deliver(m); });
}

void Population::deliver(const Message& msg) {
    auto it = agents_.find(msg.recipient);
    if (it == agents_.end()) {
        dropped_.push_back(DroppedMessage{cal_.clock(), msg, "recipient not alive"});
        return;
    }
    AgentInstance& ag = *it->second;
    const auto& state = ag.chart->states_[static_cast<std::size_t>(ag.state)];
    for (std::size_t ti : state.message_transitions) {
        if (std::get<MessageTrigger>(ag.chart->transitions_[ti].trigger).tag == msg.tag) {
            fire(ag, ti, &msg, "message:" + msg.tag);
            return;
        }
    }
    dropped_.push_back(DroppedMessage{
        cal_.clock(), msg,
        "no transition for tag in state '" + ag.state_name() + "'"});
}

int Population::notify_guards() {
    int fired_total = 0;
    for (int sweep = 0;; ++sweep) {
        if (sweep >= guard_cap_) {
            throw GuardCascadeOverflow("guard evaluation did not reach a fixed point after " +
                                       std::to_string(guard_cap_) + " sweeps");
        }
        int fired = 0;
        std::vector<AgentId> ids;
        ids.reserve(agents_.size());
        for (const auto& [id, ag] : agents_) ids.push_back(id);
        for (AgentId id : ids) {
            auto it = agents_.find(id);
            if (it == agents_.end()) continue;
            AgentInstance& ag = *it->second;
            const auto& state = ag.chart->states_[static_cast<std::size_t>(ag.state)];
            for (std::size_t ti : state.condition_transitions) {
                const auto& trig = std::get<ConditionTrigger>(ag.chart->transitions_[ti].trigger);
                const AgentContext ctx{*this, ag, cal_.clock(), nullptr};
                if (trig.guard(ctx)) {
                    fire(ag, ti, nullptr, "condition:" + trig.name);
                    ++fired;
                    break;  // one transition per agent per sweep
                }
            }
        }
        fired_total += fired;
        if (fired == 0) break;
    }
    return fired_total;
}

void Population::request_guard_sweep() {
    if (sweep_pending_ && sweep_time_ == cal_.clock()) return;
    sweep_pending_ = true;
    sweep_time_ = cal_.clock();
    cal_.schedule(
        cal_.clock(),
        [this]() {
            sweep_pending_ = false;
            notify_guards();
        },
        EventClass::Low);
}

void Population::fire(AgentInstance& ag, std::size_t transition_index, const Message* msg,
                      const std::string& trigger_desc) {
    const AgentId id = ag.id;
    const Transition& tr = ag.chart->transitions_[transition_index];
    cal_.cancel(ag.timeout_);
    log_.push_back(TransitionRecord{cal_.clock(), id, tr.source, tr.target, trigger_desc});
    if (tr.action) {
        AgentContext ctx{*this, ag, cal_.clock(), msg};
        tr.action(ctx);
        if (!alive(id)) return;
    }
    ag.state = ag.chart->state_index(tr.target);
    ag.entered_at = cal_.clock();
    const auto& target = ag.chart->states_[static_cast<std::size_t>(ag.state)];
    if (target.entry) {
        AgentContext ctx{*this, ag, cal_.clock(), msg};
        target.entry(ctx);
        if (!alive(id)) return;
    }
    arm_timeout(ag);
}

void Population::arm_timeout(AgentInstance& ag) {
    const auto& state = ag.chart->states_[static_cast<std::size_t>(ag.state)];
    if (!state.timeout_transition) return;
    const std::size_t ti = *state.timeout_transition;
    const auto& trig = std::get<TimeoutTrigger>(ag.chart->transitions_[ti].trigger);
    const AgentContext ctx{*this, ag, cal_.clock(), nullptr};
    const SimTime delay = trig.duration(ctx);
    const AgentId id = ag.id;
    ag.timeout_ = cal_.schedule(cal_.clock() + delay, [this, id, ti]() {
        auto it = agents_.find(id);
        if (it == agents_.end()) return;
        ++timeout_firings_;
        fire(*it->second, ti, nullptr, "timeout");
    });
}

void Population::write_transition_log_csv(std::ostream& out) const {
    out << "time,agent_id,from_state,to_state,trigger\n";
    out << std::fixed << std::setprecision(6);
    for (const auto& rec : log_) {
        out << rec.time << ',' << rec.agent << ',' << rec.from_state << ','
            << rec.to_state << ',' << rec.trigger << '\n';
    }
}

}  // namespace fitsim
