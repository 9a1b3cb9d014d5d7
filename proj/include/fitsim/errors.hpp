#pragma once

#include <stdexcept>
#include <string>

namespace fitsim {

// Base class for everything this library throws on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// event calendar / rng
struct SchedulingInPast : Error { using Error::Error; };
struct InvalidDistributionParameter : Error { using Error::Error; };

// agents
struct InvalidChart : Error { using Error::Error; };
struct GuardCascadeOverflow : Error { using Error::Error; };

// scenario
struct InvalidConfig : Error { using Error::Error; };
struct NoBusyTime : Error { using Error::Error; };

// statistics
struct EmptySample : Error { using Error::Error; };
struct VarianceUndefined : Error { using Error::Error; };
struct ZeroReferenceVariance : Error { using Error::Error; };
struct InvalidBinWidth : Error { using Error::Error; };

// queueing oracle
struct UnstableSystem : Error { using Error::Error; };
struct InsufficientData : Error { using Error::Error; };

// experiment harness
struct ParseError : Error { using Error::Error; };
struct ValidationError : Error { using Error::Error; };
struct NegativeWaitingTime : Error { using Error::Error; };
struct CalibrationFailed : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace fitsim
