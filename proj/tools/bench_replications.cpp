// Times the serial replication runner against the OpenMP batch runner on the
// default scenario and checks that they produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fitsim/experiment.hpp"

using namespace fitsim;

namespace {

double time_batch(const ScenarioConfig& cfg, Paradigm p, int reps, int threads,
                  std::vector<ReplicationResult>& out) {
    const auto t0 = std::chrono::steady_clock::now();
    out = threads == 1 ? run_batch_serial(cfg, p, 52000, reps)
                       : run_batch(cfg, p, 52000, reps, threads);
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    int reps = 400;
    int threads = 0;  // 0 = all processors
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--reps") == 0 && i + 1 < argc) {
            reps = std::atoi(argv[++i]);
        } else if (std::strcmp(argv[i], "--threads") == 0 && i + 1 < argc) {
            threads = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: %s [--reps N] [--threads N]\n", argv[0]);
            return 1;
        }
    }
#ifdef _OPENMP
    const int workers = threads > 0 ? threads : omp_get_max_threads();
#else
    const int workers = 1;
#endif

    const ScenarioConfig cfg = ScenarioConfig::calibrated_default();
    std::printf("%d replications of the default scenario, %d worker(s)\n", reps, workers);
    std::printf("%-9s %12s %14s %9s %7s\n", "paradigm", "serial (s)", "parallel (s)",
                "speedup", "match");

    bool all_match = true;
    for (Paradigm p : {Paradigm::DES, Paradigm::ABS}) {
        std::vector<ReplicationResult> serial, parallel;
        const double ts = time_batch(cfg, p, reps, 1, serial);
        const double tp = time_batch(cfg, p, reps, workers, parallel);
        bool match = serial.size() == parallel.size();
        for (std::size_t i = 0; match && i < serial.size(); ++i) {
            match = identical_outcome(serial[i], parallel[i]);
        }
        all_match = all_match && match;
        std::printf("%-9s %12.3f %14.3f %8.2fx %7s\n", to_string(p), ts, tp, ts / tp,
                    match ? "yes" : "NO");
    }
    if (!all_match) {
        std::fprintf(stderr, "parallel results diverged from the serial reference\n");
        return 1;
    }
    return 0;
}
