#pragma once

#include <stdexcept>
#include <string>

namespace saudit {

// Base class for every error the library raises. Catch this at the CLI
// boundary to map failures onto the exit-code contract.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// sampling
class InvalidLogits : public Error {
public:
    using Error::Error;
};
class InvalidTemperature : public Error {
public:
    using Error::Error;
};
class DegenerateKeepSet : public Error {
public:
    using Error::Error;
};

// stats
class InvalidDof : public Error {
public:
    using Error::Error;
};
class EmptyInput : public Error {
public:
    using Error::Error;
};
class InsufficientData : public Error {
public:
    using Error::Error;
};

// Zero-variance paired differences. Carries the documented convention values
// (t = +/-inf, p = 0 or 1 for the requested alternative) so callers that want
// to render the degenerate case can do so without recomputing.
class DegenerateVariance : public Error {
public:
    DegenerateVariance(const std::string& what, double convention_t, double convention_p)
        : Error(what), convention_t(convention_t), convention_p(convention_p) {}
    double convention_t;
    double convention_p;
};

// sweeps
class InvalidSubsetSize : public Error {
public:
    using Error::Error;
};
class UnknownSampler : public Error {
public:
    using Error::Error;
};

// toy harness
class CorpusTooSmall : public Error {
public:
    using Error::Error;
};
class EmptyGeneration : public Error {
public:
    using Error::Error;
};

// file ingestion / reports
class DataError : public Error {
public:
    using Error::Error;
};

} // namespace saudit
