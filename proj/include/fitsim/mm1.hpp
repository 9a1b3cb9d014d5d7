#pragma once

#include "fitsim/errors.hpp"

namespace fitsim {

struct ReplicationResult;

struct MM1Params {
    double lambda = 0.0;  // arrivals per minute
    double mu = 1.0;      // services per minute
};

struct MM1Metrics {
    double rho = 0.0;
    double wq = 0.0;  // mean wait in queue, minutes
    double w = 0.0;   // mean time in system
    double lq = 0.0;  // mean number waiting
    double l = 0.0;   // mean number in system
};

// Closed-form steady-state results for the single-server Markovian queue.
// Throws UnstableSystem when rho >= 1.
MM1Metrics mm1_metrics(const MM1Params& p);

// Relative discrepancy |L - lambda * W| / max(L, 1e-12).
double littles_law_error(double l_observed, double lambda_observed, double w_observed);

// Applies the check to a finished replication: L comes from the recorded
// queue-length time integral over the elapsed window, W from the
// completed-customer waits. Throws InsufficientData when the replication
// completed no customers.
double littles_law_check(const ReplicationResult& result, double lambda_observed);

}  // namespace fitsim
