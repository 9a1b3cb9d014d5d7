#include "fitsim/rng.hpp"

#include <cmath>

namespace fitsim {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Finalizer from SplitMix64 (Steele, Lea, Flood 2014).
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_index_(stream_index) {
    // Decorrelate substreams by mixing the index into the seed before the
    // generator ever runs.
    state_ = mix64(seed + kGolden * (stream_index + 1));
}

std::uint64_t RngStream::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double RngStream::next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

Distribution Distribution::exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw InvalidDistributionParameter("exponential rate must be > 0");
    }
    return Distribution(Kind::Exponential, rate);
}

Distribution Distribution::deterministic(double value) {
    if (!(value >= 0.0) || !std::isfinite(value)) {
        throw InvalidDistributionParameter("deterministic value must be >= 0");
    }
    return Distribution(Kind::Deterministic, value);
}

Distribution Distribution::geometric(double p) {
    if (!(p > 0.0) || !(p <= 1.0)) {
        throw InvalidDistributionParameter("geometric p must be in (0, 1]");
    }
    return Distribution(Kind::Geometric, p);
}

double Distribution::mean() const {
    switch (kind_) {
        case Kind::Exponential: return 1.0 / param_;
        case Kind::Deterministic: return param_;
        case Kind::Geometric: return 1.0 / param_;
    }
    return 0.0;
}

std::string Distribution::describe() const {
    switch (kind_) {
        case Kind::Exponential:
            return "exponential(rate=" + std::to_string(param_) + ")";
        case Kind::Deterministic:
            return "deterministic(" + std::to_string(param_) + ")";
        case Kind::Geometric:
            return "geometric(p=" + std::to_string(param_) + ")";
    }
    return "?";
}

double draw(RngStream& stream, const Distribution& dist) {
    switch (dist.kind()) {
        case Distribution::Kind::Exponential: {
            const double u = stream.next_uniform();
            return -std::log1p(-u) / dist.param();
        }
        case Distribution::Kind::Deterministic:
            return dist.param();
        case Distribution::Kind::Geometric: {
            if (dist.param() == 1.0) return 1.0;
            const double u = stream.next_uniform();
            return std::floor(std::log1p(-u) / std::log1p(-dist.param())) + 1.0;
        }
    }
    return 0.0;
}

}  // namespace fitsim
