#pragma once

#include <span>
#include <vector>

#include "lcoguard/core_model.hpp"

namespace lcoguard {

/// Integration stopped early. Carries the last state that was accepted.
class IntegrationError : public NumericalError {
public:
    IntegrationError(const std::string& what, double last_time, StateVector last_state)
        : NumericalError(what), last_time_(last_time), last_state_(std::move(last_state)) {}
    double last_time() const noexcept { return last_time_; }
    const StateVector& last_state() const noexcept { return last_state_; }

private:
    double last_time_;
    StateVector last_state_;
};

struct Trajectory {
    std::vector<double> t;
    std::vector<StateVector> x;
};

inline constexpr double kMinTolerance = 1e-12;
inline constexpr double kMaxTolerance = 1e-3;

/// Adaptive Dormand-Prince 5(4) integration with dense output at `times`
/// (non-decreasing, starting at or after 0). `tol` bounds the local error
/// (absolute and relative).
Trajectory integrate(const VectorField& field, const StateVector& x0, std::span<const double> times, double tol);

/// Uniform samples every `sample_dt` up to and including t_end.
Trajectory integrate(const VectorField& field, const StateVector& x0, double t_end, double tol, double sample_dt);
Trajectory integrate(const DimensionlessSystem& sys, const StateVector& x0, double t_end, double tol,
                     double sample_dt);

/// State at time t (the last step is truncated to land on t exactly).
StateVector flow(const VectorField& field, const StateVector& x0, double t, double tol);

/// Flow together with its state-transition matrix and the mu1 sensitivity.
struct FlowSensitivities {
    StateVector x;
    Matrix4 transition;
    StateVector d_mu1;
};

FlowSensitivities flow_with_sensitivities(const VectorField& field, const StateVector& x0, double t, double tol);

}  // namespace lcoguard
