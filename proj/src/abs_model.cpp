#include <chrono>

#include "world.hpp"

namespace fitsim {

namespace {

using detail::World;

int customer_of(const AgentInstance& agent) { return std::any_cast<int>(agent.attributes); }
int staff_of(const AgentInstance& agent) { return std::any_cast<int>(agent.attributes); }

// Agent engine: customers and staff are state-chart agents exchanging
// messages; queue membership and statistics live in the shared world. Staff
// dispatch runs in deferred guard sweeps, mirroring the process-flow engine
// decision for decision.
class AbsEngine {
public:
    AbsEngine(World& world, Population& pop) : world_(world), pop_(pop) {
        build_customer_chart();
        build_staff_chart();
        for (int s = 0; s < world_.staff_count(); ++s) {
            pop_.spawn(staff_chart_, s);
        }
    }

    void start() {
        if (!world_.config().has_arrivals()) return;
        const double first = world_.next_interarrival();
        if (first < world_.config().horizon_minutes) {
            world_.calendar().schedule(first, [this]() { arrival(); });
        }
    }

private:
    void arrival() {
        EventCalendar& cal = world_.calendar();
        const int cid = world_.new_customer(cal.clock());
        const AgentId agent = pop_.spawn(customer_chart_, cid);
        if (static_cast<std::size_t>(cid) >= customer_agents_.size()) {
            customer_agents_.resize(static_cast<std::size_t>(cid) + 1, -1);
        }
        customer_agents_[static_cast<std::size_t>(cid)] = agent;

        const double next = cal.clock() + world_.next_interarrival();
        if (next < world_.config().horizon_minutes) {
            cal.schedule(next, [this]() { arrival(); });
        }
    }

    void tell_customer(int cid, const std::string& tag, AgentId sender) {
        pop_.send_message(
            Message{tag, sender, customer_agents_[static_cast<std::size_t>(cid)], {}},
            world_.calendar().clock());
    }

    void build_customer_chart() {
        StateChart& c = customer_chart_;
        c.add_state("WaitEntry", [this](AgentContext& ctx) {
            world_.join_queue(QueueId::Entry, customer_of(ctx.agent));
            pop_.request_guard_sweep();
        });
        c.add_state("BeingServedEntry");
        // A customer decides once, on entering the fitting room, whether help
        // will be wanted; the fitting delay is a message to self.
        c.add_state("Fitting", [this](AgentContext& ctx) {
            const Customer& cust = world_.customer(customer_of(ctx.agent));
            pop_.send_message(Message{cust.wants_help ? "fit_done_help" : "fit_done_return",
                                      ctx.agent.id, ctx.agent.id, {}},
                              ctx.now + cust.fitting);
        });
        c.add_state("WaitHelp", [this](AgentContext& ctx) {
            world_.join_queue(QueueId::Help, customer_of(ctx.agent));
            pop_.request_guard_sweep();
        });
        c.add_state("BeingHelped");
        c.add_state("WaitReturn", [this](AgentContext& ctx) {
            world_.join_queue(QueueId::Return, customer_of(ctx.agent));
            pop_.request_guard_sweep();
        });
        c.add_state("BeingServedReturn");
        c.add_state("Departed", [this](AgentContext& ctx) {
            world_.depart(customer_of(ctx.agent));
            pop_.despawn(ctx.agent.id);
        });
        c.set_initial("WaitEntry");

        c.on_message("WaitEntry", "BeingServedEntry", "start_entry");
        c.on_message("BeingServedEntry", "Fitting", "done_entry");
        c.on_message("Fitting", "WaitHelp", "fit_done_help");
        c.on_message("Fitting", "WaitReturn", "fit_done_return");
        c.on_message("WaitHelp", "BeingHelped", "start_help");
        // Resumed fitting after help takes no extra time.
        c.on_message("BeingHelped", "WaitReturn", "done_help");
        c.on_message("WaitReturn", "BeingServedReturn", "start_return");
        c.on_message("BeingServedReturn", "Departed", "done_return");
    }

    void build_staff_chart() {
        StateChart& s = staff_chart_;
        s.add_state("Idle", [this](AgentContext&) { pop_.request_guard_sweep(); });
        s.add_state("ServingEntry");
        s.add_state("Helping");
        s.add_state("ServingReturn");
        s.set_initial("Idle");

        auto takes = [this](QueueId q) {
            return [this, q](const AgentContext&) { return world_.select_job() == q; };
        };
        auto begins = [this](QueueId q, const char* tag) {
            return [this, q, tag](AgentContext& ctx) {
                const auto a = world_.begin_service(staff_of(ctx.agent), q);
                tell_customer(a.customer, tag, ctx.agent.id);
            };
        };
        auto finishes = [this](const char* tag) {
            return [this, tag](AgentContext& ctx) {
                const auto done = world_.finish_service(staff_of(ctx.agent));
                tell_customer(done.customer, tag, ctx.agent.id);
            };
        };
        DurationFn service_time = [this](const AgentContext& ctx) {
            return world_.staff(staff_of(ctx.agent)).duration;
        };

        s.on_condition("Idle", "ServingReturn", "return_selected", takes(QueueId::Return),
                       begins(QueueId::Return, "start_return"));
        s.on_condition("Idle", "ServingEntry", "entry_selected", takes(QueueId::Entry),
                       begins(QueueId::Entry, "start_entry"));
        s.on_condition("Idle", "Helping", "help_selected", takes(QueueId::Help),
                       begins(QueueId::Help, "start_help"));
        s.on_timeout("ServingEntry", "Idle", service_time, finishes("done_entry"));
        s.on_timeout("Helping", "Idle", service_time, finishes("done_help"));
        s.on_timeout("ServingReturn", "Idle", service_time, finishes("done_return"));
    }

    World& world_;
    Population& pop_;
    StateChart customer_chart_;
    StateChart staff_chart_;
    std::vector<AgentId> customer_agents_;
};

}  // namespace

ReplicationResult run_abs_replication(const ScenarioConfig& config, std::uint64_t seed,
                                      std::vector<TransitionRecord>* transition_log) {
    config.validate();
    const auto t0 = std::chrono::steady_clock::now();

    EventCalendar cal;
    World world(config, cal, seed);
    Population pop(cal);
    AbsEngine engine(world, pop);
    engine.start();

    SimTime elapsed = config.horizon_minutes;
    if (config.close_policy == ClosePolicy::FinishInSystem) {
        cal.run_all();
        elapsed = std::max(cal.clock(), config.horizon_minutes);
    } else {
        cal.run_until(config.horizon_minutes);
    }

    ReplicationResult result = world.finalize(Paradigm::ABS, elapsed);
    result.run_wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (transition_log) *transition_log = pop.transition_log();
    return result;
}

}  // namespace fitsim
