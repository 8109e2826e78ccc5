#pragma once

#include <stdexcept>
#include <string>

namespace ncover {

/// Invalid sizes, exponents, tables or other caller-supplied parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The pointwise pressure system is (numerically) singular, i.e. Jg.g' != 1.
class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Pressure-gradient data that does not integrate to a single-valued pressure.
class CompatibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A certificate mode was requested whose hypotheses the data does not meet.
class ModeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Angular resolution too low for the requested Fourier truncation.
class AliasingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A weighted integral was requested for a field whose support reaches the origin.
class SupportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A competitor is not incompressible or does not share the boundary trace.
class AdmissibilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Internal consistency check failed (e.g. a generated competitor drifted off det = 1).
class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

}  // namespace ncover
