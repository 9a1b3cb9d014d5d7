#pragma once

#include <cstdint>
#include <string>

#include "fitsim/errors.hpp"

namespace fitsim {

// Seeded substream of pseudo-random numbers. A (seed, stream_index) pair
// identifies the sequence exactly, on every platform: the generator is plain
// 64-bit integer arithmetic (SplitMix64 over a mixed key), so replications
// and purposes can each own an independent, reproducible stream.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

    std::uint64_t next_u64();

    // Uniform on [0, 1) with 53 random bits.
    double next_uniform();

private:
    std::uint64_t seed_;
    std::uint64_t stream_index_;
    std::uint64_t state_;
};

// Distribution descriptor for the handful of variate families the scenarios
// need. Exponential and geometric draws use inverse transforms on the
// stream's uniform output; deterministic consumes nothing.
class Distribution {
public:
    enum class Kind { Exponential, Deterministic, Geometric };

    static Distribution exponential(double rate);
    static Distribution deterministic(double value);
    static Distribution geometric(double p);  // support {1, 2, ...}

    Kind kind() const { return kind_; }
    double param() const { return param_; }
    double mean() const;

    bool operator==(const Distribution&) const = default;

    std::string describe() const;

private:
    Distribution(Kind kind, double param) : kind_(kind), param_(param) {}
    Kind kind_;
    double param_;
};

// One variate from `dist`, consuming from `stream`.
double draw(RngStream& stream, const Distribution& dist);

}  // namespace fitsim
