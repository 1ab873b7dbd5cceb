#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace lcoguard {

using StateVector = Eigen::Vector4d;
using Matrix4 = Eigen::Matrix4d;

/// Invalid physical or dimensionless input. The message names the offending field.
class DomainError : public std::invalid_argument {
public:
    DomainError(std::string field, const std::string& what)
        : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// A numerical procedure (integration, Newton, bisection) did not deliver.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Van der Pol-Duffing primary with an attached absorber, in physical units.
struct PhysicalSystem {
    double m1 = 1.0;
    double c1 = 0.0;
    double k1 = 1.0;
    double knl1 = 0.0;
    double m2 = 0.05;
    double c2 = 0.0;
    double k2 = 0.0;
    double knl2_2 = 0.0;
    double knl2_3 = 0.0;
    double knl2_5 = 0.0;

    void validate() const;
};

/// Dimensionless parameter record shared by every analysis.
///
/// Time is scaled by the primary natural frequency, so all dynamics are
/// expressed in tau = t * omega_n1. The state is (q1, dq1, qd, dqd) with
/// qd = q1 - q2.
///
/// `lambda` holds the damping of an essentially nonlinear absorber
/// (Lambda = c2 / (m2 * omega_n1)). It is only meaningful with gamma == 0,
/// where the mu2 * gamma parameterization of the damper degenerates.
struct DimensionlessSystem {
    double eps = 0.05;
    double mu1 = 0.0;
    double mu2 = 0.0;
    double gamma = 1.0;
    double alpha3 = 0.0;
    double beta2 = 0.0;
    double beta3 = 0.0;
    double beta5 = 0.0;
    std::optional<double> lambda;

    void validate() const;

    double absorber_stiffness() const noexcept { return gamma * gamma; }
    double absorber_damping() const noexcept { return lambda ? *lambda : 2.0 * mu2 * gamma; }
    bool is_nes() const noexcept { return lambda.has_value(); }

    DimensionlessSystem with_mu1(double value) const {
        auto copy = *this;
        copy.mu1 = value;
        return copy;
    }

    bool operator==(const DimensionlessSystem&) const = default;
};

DimensionlessSystem nondimensionalize(const PhysicalSystem& phys);

/// Inverse of nondimensionalize for a chosen primary mass and stiffness.
PhysicalSystem redimensionalize(const DimensionlessSystem& sys, double m1, double k1);

/// Right-hand side of the coupled first-order system.
///
/// `primary_coupling` scales the absorber force acting on the primary (eps
/// normally, 0 when the absorber is detached); `relative_coupling` scales it
/// in the relative-coordinate equation (1 + eps).
class VectorField {
public:
    explicit VectorField(const DimensionlessSystem& sys);

    /// Primary oscillator with the absorber force removed from its equation.
    static VectorField primary_only(const DimensionlessSystem& sys);

    StateVector operator()(const StateVector& x) const noexcept;
    Matrix4 jacobian(const StateVector& x) const noexcept;
    /// Partial derivative of the field with respect to mu1.
    StateVector parameter_derivative(const StateVector& x) const noexcept;
    Matrix4 linear_matrix() const noexcept;

    double mu1() const noexcept { return mu1_; }
    void set_mu1(double mu1) noexcept { mu1_ = mu1; }

private:
    VectorField() = default;

    double mu1_ = 0.0;
    double alpha3_ = 0.0;
    double stiffness_ = 0.0;
    double damping_ = 0.0;
    double beta2_ = 0.0;
    double beta3_ = 0.0;
    double beta5_ = 0.0;
    double primary_coupling_ = 0.0;
    double relative_coupling_ = 1.0;
};

StateVector rhs(const DimensionlessSystem& sys, const StateVector& x);
Matrix4 jacobian(const DimensionlessSystem& sys, const StateVector& x);
Matrix4 linear_matrix(const DimensionlessSystem& sys);

void to_json(nlohmann::json& j, const DimensionlessSystem& sys);
/// Absent nonlinear keys default to zero. Unknown keys are rejected.
void from_json(const nlohmann::json& j, DimensionlessSystem& sys);

}  // namespace lcoguard
