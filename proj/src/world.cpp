#include "world.hpp"

#include <algorithm>
#include <cmath>

namespace fitsim::detail {

namespace {

RngStream purpose_stream(std::uint64_t seed, StreamPurpose purpose) {
    return RngStream(seed, static_cast<std::uint64_t>(purpose));
}

}  // namespace

World::World(const ScenarioConfig& config, EventCalendar& calendar, std::uint64_t seed)
    : config_(config),
      cal_(calendar),
      seed_(seed),
      arrivals_(purpose_stream(seed, StreamPurpose::Arrivals)),
      entry_service_(purpose_stream(seed, StreamPurpose::EntryService)),
      help_service_(purpose_stream(seed, StreamPurpose::HelpService)),
      return_service_(purpose_stream(seed, StreamPurpose::ReturnService)),
      fitting_(purpose_stream(seed, StreamPurpose::FittingDuration)),
      help_decision_(purpose_stream(seed, StreamPurpose::HelpDecision)),
      garments_(purpose_stream(seed, StreamPurpose::GarmentCount)) {
    staff_.resize(static_cast<std::size_t>(config.staff_count));
    queue_changed_at_.fill(0.0);
}

double World::next_interarrival() {
    if (config_.interarrival) {
        return draw(arrivals_, *config_.interarrival);
    }
    const double u = arrivals_.next_uniform();
    return -std::log1p(-u) / config_.arrival_rate;
}

int World::new_customer(SimTime arrival) {
    Customer c;
    c.id = static_cast<int>(customers_.size());
    c.arrival = arrival;
    c.garments = static_cast<int>(draw(garments_, config_.garment_count));
    c.wants_help = help_decision_.next_uniform() < config_.help_probability;
    const double garment_extra =
        config_.per_garment_service_minutes * static_cast<double>(c.garments);
    c.job1 = draw(entry_service_, config_.job1_service) + garment_extra;
    c.job2 = draw(help_service_, config_.job2_service);
    c.job3 = draw(return_service_, config_.job3_service) + garment_extra;
    c.fitting = draw(fitting_, config_.fitting_duration);
    customers_.push_back(c);
    return c.id;
}

void World::record_queue_change(QueueId q, int delta) {
    const int qi = static_cast<int>(q);
    const SimTime now = cal_.clock();
    queue_integral_[qi] += queue_len_[qi] * (now - queue_changed_at_[qi]);
    queue_changed_at_[qi] = now;
    queue_len_[qi] += delta;
}

void World::join_queue(QueueId q, int customer_id) {
    const int qi = static_cast<int>(q);
    record_queue_change(q, +1);
    queues_[qi].push_back(customer_id);
    join_order_[qi].push_back(customer_id);
    Customer& c = customer(customer_id);
    switch (q) {
        case QueueId::Entry: c.entry_join = cal_.clock(); break;
        case QueueId::Help: c.help_join = cal_.clock(); break;
        case QueueId::Return: c.return_join = cal_.clock(); break;
    }
}

bool World::queue_empty(QueueId q) const {
    return queues_[static_cast<int>(q)].empty();
}

std::array<std::optional<SimTime>, 3> World::queue_heads() const {
    std::array<std::optional<SimTime>, 3> heads;
    for (int qi = 0; qi < 3; ++qi) {
        if (queues_[qi].empty()) continue;
        const Customer& head = customers_[static_cast<std::size_t>(queues_[qi].front())];
        switch (static_cast<QueueId>(qi)) {
            case QueueId::Entry: heads[qi] = head.entry_join; break;
            case QueueId::Help: heads[qi] = head.help_join; break;
            case QueueId::Return: heads[qi] = head.return_join; break;
        }
    }
    return heads;
}

std::optional<QueueId> World::select_job() const {
    return staff_select_next_job(queue_heads(), config_.job_selection_policy);
}

int World::staff_count() const { return static_cast<int>(staff_.size()); }

int World::first_idle_staff() const {
    for (std::size_t i = 0; i < staff_.size(); ++i) {
        if (!staff_[i].busy) return static_cast<int>(i);
    }
    return -1;
}

World::Assignment World::begin_service(int staff_index, QueueId q) {
    const int qi = static_cast<int>(q);
    StaffState& s = staff_[static_cast<std::size_t>(staff_index)];
    record_queue_change(q, -1);
    const int cid = queues_[qi].front();
    queues_[qi].pop_front();
    start_order_[qi].push_back(cid);

    Customer& c = customer(cid);
    const SimTime now = cal_.clock();
    double duration = 0.0;
    switch (q) {
        case QueueId::Entry:
            c.entry_start = now;
            queue_waits_[qi].push_back(now - c.entry_join);
            duration = c.job1;
            s.job = StaffJob::CountAndCard;
            break;
        case QueueId::Help:
            c.help_start = now;
            queue_waits_[qi].push_back(now - c.help_join);
            duration = c.job2;
            s.job = StaffJob::Help;
            break;
        case QueueId::Return:
            c.return_start = now;
            queue_waits_[qi].push_back(now - c.return_join);
            duration = c.job3;
            s.job = StaffJob::ReceiveReturn;
            break;
    }
    s.busy = true;
    s.customer = cid;
    s.duration = duration;
    return Assignment{cid, duration};
}

World::Completion World::finish_service(int staff_index) {
    StaffState& s = staff_[static_cast<std::size_t>(staff_index)];
    const Completion done{s.customer, s.job};
    busy_minutes_[static_cast<int>(s.job)] += s.duration;
    Customer& c = customer(s.customer);
    switch (s.job) {
        case StaffJob::CountAndCard: c.entry_done = cal_.clock(); break;
        case StaffJob::Help: c.help_done = cal_.clock(); break;
        case StaffJob::ReceiveReturn: break;  // departure is recorded separately
    }
    s.busy = false;
    s.customer = -1;
    s.duration = 0.0;
    return done;
}

void World::depart(int customer_id) {
    customer(customer_id).depart = cal_.clock();
    ++completed_;
}

ReplicationResult World::finalize(Paradigm paradigm, SimTime elapsed) {
    for (int qi = 0; qi < 3; ++qi) {
        queue_integral_[qi] += queue_len_[qi] * (elapsed - queue_changed_at_[qi]);
        queue_changed_at_[qi] = elapsed;
    }

    ReplicationResult r;
    r.seed = seed_;
    r.paradigm = paradigm;
    r.customers_arrived = static_cast<long>(customers_.size());
    r.customers_completed = completed_;
    r.in_system_at_close = r.customers_arrived - r.customers_completed;
    r.per_queue_samples = queue_waits_;
    r.staff_busy_minutes_by_job = busy_minutes_;
    r.join_order = join_order_;
    r.start_order = start_order_;
    r.queue_integral_by_queue = queue_integral_;
    r.queue_integral_total = queue_integral_[0] + queue_integral_[1] + queue_integral_[2];
    r.elapsed_minutes = elapsed;
    r.stability_warning = !config_.stable();

    r.waiting_time_sample.reserve(static_cast<std::size_t>(completed_));
    r.customer_rows.reserve(static_cast<std::size_t>(completed_));
    for (const Customer& c : customers_) {
        if (!c.completed()) continue;
        r.waiting_time_sample.push_back(c.total_wait());
        r.customer_rows.push_back(CustomerWaitRow{c.id, c.arrival, c.total_wait(),
                                                  c.entry_wait(), c.help_wait(),
                                                  c.return_wait()});
    }
    return r;
}

}  // namespace fitsim::detail
