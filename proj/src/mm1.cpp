#include "fitsim/mm1.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fitsim/scenario.hpp"
#include "fitsim/stats.hpp"

namespace fitsim {

MM1Metrics mm1_metrics(const MM1Params& p) {
    if (!(p.mu > 0.0)) throw UnstableSystem("mu must be > 0");
    if (!(p.lambda >= 0.0)) throw UnstableSystem("lambda must be >= 0");
    const double rho = p.lambda / p.mu;
    if (rho >= 1.0) {
        throw UnstableSystem("rho = " + std::to_string(rho) + " >= 1, no steady state");
    }
    MM1Metrics m;
    m.rho = rho;
    m.wq = p.lambda / (p.mu * (p.mu - p.lambda));
    m.w = m.wq + 1.0 / p.mu;
    m.lq = p.lambda * m.wq;
    m.l = p.lambda * m.w;
    return m;
}

double littles_law_error(double l_observed, double lambda_observed, double w_observed) {
    return std::fabs(l_observed - lambda_observed * w_observed) /
           std::max(l_observed, 1e-12);
}

double littles_law_check(const ReplicationResult& result, double lambda_observed) {
    if (result.waiting_time_sample.empty() || !(result.elapsed_minutes > 0.0)) {
        throw InsufficientData("replication completed no customers");
    }
    const double l_observed = result.queue_integral_total / result.elapsed_minutes;
    const double w_observed =
        sample_mean(Sample{result.waiting_time_sample, "waits"});
    return littles_law_error(l_observed, lambda_observed, w_observed);
}

}  // namespace fitsim
