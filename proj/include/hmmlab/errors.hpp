// Exception hierarchy for hmmlab.
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hmmlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

/// Power iteration found two distinct invariant laws (reducible chain).
class NonUniqueStationary : public Error {
public:
    using Error::Error;
};

class NoConvergence : public Error {
public:
    using Error::Error;
};

class ZeroStationaryMass : public Error {
public:
    using Error::Error;
};

class MissingSampler : public Error {
public:
    using Error::Error;
};

/// The filter normalizer vanished: the observation at `time()` is impossible
/// under the current prediction.
class DegenerateFilter : public Error {
public:
    DegenerateFilter(std::size_t time, const std::string &what)
        : Error(what + " (time index " + std::to_string(time) + ")"), time_(time) {}

    std::size_t time() const noexcept { return time_; }

private:
    std::size_t time_;
};

class UndefinedRatio : public Error {
public:
    using Error::Error;
};

/// Some backward row vanished identically: the observation window is
/// impossible under the model.
class AllZeroRow : public Error {
public:
    AllZeroRow(std::size_t time, const std::string &what)
        : Error(what + " (time index " + std::to_string(time) + ")"), time_(time) {}

    std::size_t time() const noexcept { return time_; }

private:
    std::size_t time_;
};

class UnreachableStart : public Error {
public:
    using Error::Error;
};

class SupportViolation : public Error {
public:
    using Error::Error;
};

class SizeGuardExceeded : public Error {
public:
    using Error::Error;
};

class ZeroMassCondition : public Error {
public:
    using Error::Error;
};

/// Model data failed validation (exit code 3 at the CLI).
class ModelError : public Error {
public:
    using Error::Error;
};

/// Malformed configuration, unknown scenario, missing file (exit code 2).
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace hmmlab
