#pragma once

#include <stdexcept>
#include <string>

namespace coinlab {

/// Raised when an argument lies outside the domain of an operation
/// (nonpositive axes, theta inside the guard band, coincident points, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when a numerical procedure fails to converge or to bracket a root.
/// Carries the phase point being processed when one is available.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
    NumericError(const std::string& what, double phi, double theta)
        : std::runtime_error(what + " at (phi=" + std::to_string(phi) +
                             ", theta=" + std::to_string(theta) + ")"),
          phi_(phi), theta_(theta), has_point_(true) {}

    bool has_point() const { return has_point_; }
    double phi() const { return phi_; }
    double theta() const { return theta_; }

private:
    double phi_ = 0.0;
    double theta_ = 0.0;
    bool has_point_ = false;
};

/// A pair (phi0, phi1) that cannot be joined by a near-boundary orbit segment
/// inside the configured theta window.
class NotInDeltaError : public DomainError {
public:
    using DomainError::DomainError;
};

}  // namespace coinlab
