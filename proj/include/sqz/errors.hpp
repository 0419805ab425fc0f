#ifndef SQZ_ERRORS_HPP
#define SQZ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sqz {

/// Base class for every failure raised by the library. The CLI maps the
/// subtree to exit codes: InputError -> 4, DesignError -> 2, everything
/// else surfaced during verification -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed caller input: dimensions, grids, schedules, spec files.
struct InputError : Error {
    using Error::Error;
};

struct InvalidDimensionError : InputError {
    using InputError::InputError;
};
struct InvalidFrequencyError : InputError {
    using InputError::InputError;
};
struct UnsupportedTemperatureError : InputError {
    using InputError::InputError;
};
struct DimensionMismatchError : InputError {
    using InputError::InputError;
};
struct InvalidScheduleError : InputError {
    using InputError::InputError;
};
struct CoverageError : InputError {
    using InputError::InputError;
};
struct WrongBranchError : InputError {
    using InputError::InputError;
};
struct UnsupportedRegimeError : InputError {
    using InputError::InputError;
};

/// A requested protocol cannot be realized by the scheme.
struct DesignError : Error {
    using Error::Error;
};

struct SignSplitError : DesignError {
    using DesignError::DesignError;
};

/// Carries the first offending time point of the design grid.
struct DesignInfeasibleError : DesignError {
    DesignInfeasibleError(const std::string& what, double t_offending)
        : DesignError(what), t(t_offending) {}
    double t;
};

struct FlowDomainError : DesignError {
    FlowDomainError(const std::string& what, double t_offending)
        : DesignError(what), t(t_offending) {}
    double t;
};

struct DegenerateParameterError : Error {
    using Error::Error;
};
struct OutOfDomainError : Error {
    using Error::Error;
};
struct InvalidStateError : Error {
    using Error::Error;
};
struct InternalConsistencyError : Error {
    using Error::Error;
};

/// Integrator accuracy guard tripped; carries a usable suggestion.
struct StepSizeError : Error {
    StepSizeError(const std::string& what, double suggested)
        : Error(what), suggested_dt(suggested) {}
    double suggested_dt;
};

}  // namespace sqz

#endif
