#pragma once

#include <stdexcept>
#include <string>

namespace kslab {

// Base class for everything thrown by the library. `config_error` covers
// invalid inputs (caught by the CLI and mapped to exit code 2),
// `numeric_error` covers failures that happen mid-computation (exit code 1).
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct config_error : error {
    using error::error;
};

struct numeric_error : error {
    using error::error;
};

struct NonPositiveWeight : config_error {
    using config_error::config_error;
};
struct AsymmetricDistance : config_error {
    using config_error::config_error;
};
struct NonFiniteCoordinate : config_error {
    using config_error::config_error;
};
struct RadiusBelowResolution : config_error {
    using config_error::config_error;
};
struct ExponentBelowOne : config_error {
    using config_error::config_error;
};
struct ExponentNotAboveOne : config_error {
    using config_error::config_error;
};
struct EmptySet : config_error {
    using config_error::config_error;
};
struct SpaceMismatch : config_error {
    using config_error::config_error;
};
struct DegenerateDenominator : numeric_error {
    using numeric_error::numeric_error;
};
struct CellsNotPartition : config_error {
    using config_error::config_error;
};
struct TouchingBoundary : config_error {
    using config_error::config_error;
};
struct InfeasibleBoundary : config_error {
    using config_error::config_error;
};

} // namespace kslab
