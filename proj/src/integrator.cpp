#include "lcoguard/integrator.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

namespace lcoguard {

namespace odeint = boost::numeric::odeint;

namespace {

using State4 = std::array<double, 4>;
// x (4), column-major transition matrix (16), mu1 sensitivity (4).
using State24 = std::array<double, 24>;

constexpr std::size_t kMaxSteps = 2'000'000;

void check_tolerance(double tol) {
    if (!(tol >= kMinTolerance && tol <= kMaxTolerance))
        throw DomainError("tol", "must lie in [1e-12, 1e-3]");
}

StateVector to_vector(const double* p) { return {p[0], p[1], p[2], p[3]}; }

struct PlainSystem {
    const VectorField& field;
    void operator()(const State4& x, State4& dxdt, double /*t*/) const {
        const StateVector f = field(to_vector(x.data()));
        for (int i = 0; i < 4; ++i) dxdt[static_cast<std::size_t>(i)] = f[i];
    }
};

struct VariationalSystem {
    const VectorField& field;
    void operator()(const State24& s, State24& ds, double /*t*/) const {
        const StateVector x = to_vector(s.data());
        const StateVector f = field(x);
        const Matrix4 jac = field.jacobian(x);
        const Eigen::Map<const Matrix4> phi(s.data() + 4);
        const Eigen::Map<const Eigen::Vector4d> sens(s.data() + 20);
        Eigen::Map<Eigen::Vector4d>(ds.data()) = f;
        Eigen::Map<Matrix4>(ds.data() + 4) = jac * phi;
        Eigen::Map<Eigen::Vector4d>(ds.data() + 20) = jac * sens + field.parameter_derivative(x);
    }
};

template <class System, class State>
void integrate_exact(const System& system, State& x, double t_end, double tol) {
    auto stepper = odeint::make_controlled(tol, tol, odeint::runge_kutta_dopri5<State>());
    double t = 0.0;
    double dt = std::min(0.05, t_end);
    std::size_t steps = 0;
    while (t_end - t > 1e-14 * std::max(1.0, t_end)) {
        if (t + dt > t_end) dt = t_end - t;
        if (stepper.try_step(system, x, t, dt) == odeint::fail) {
            if (dt < 1e-14 * std::max(1.0, std::abs(t)))
                throw IntegrationError("step size underflow", t, to_vector(x.data()));
        }
        if (++steps > kMaxSteps) throw IntegrationError("too many steps", t, to_vector(x.data()));
        if (!std::isfinite(x[0])) throw IntegrationError("state became non-finite", t, to_vector(x.data()));
    }
}

}  // namespace

Trajectory integrate(const VectorField& field, const StateVector& x0, std::span<const double> times, double tol) {
    check_tolerance(tol);
    Trajectory out;
    if (times.empty()) return out;
    if (times.front() < 0.0) throw DomainError("times", "must start at or after 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] < times[i - 1]) throw DomainError("times", "must be non-decreasing");

    out.t.reserve(times.size());
    out.x.reserve(times.size());
    const PlainSystem system{field};
    auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<State4>());
    State4 x{x0[0], x0[1], x0[2], x0[3]};
    stepper.initialize(x, 0.0, 0.01);
    std::size_t next = 0;
    std::size_t steps = 0;
    State4 sample{};
    const auto emit_until = [&](double t_reached) {
        while (next < times.size() && times[next] <= t_reached) {
            if (times[next] == 0.0) {
                sample = x;
            } else {
                stepper.calc_state(times[next], sample);
            }
            out.t.push_back(times[next]);
            out.x.push_back(to_vector(sample.data()));
            ++next;
        }
    };
    emit_until(0.0);
    try {
        while (next < times.size()) {
            if (stepper.current_time_step() < 1e-14 * std::max(1.0, stepper.current_time()))
                throw IntegrationError("step size underflow", stepper.current_time(),
                                       to_vector(stepper.current_state().data()));
            if (++steps > kMaxSteps)
                throw IntegrationError("too many steps", stepper.current_time(),
                                       to_vector(stepper.current_state().data()));
            const auto span_done = stepper.do_step(system);
            if (!std::isfinite(stepper.current_state()[0]))
                throw IntegrationError("state became non-finite", span_done.first,
                                       to_vector(stepper.current_state().data()));
            emit_until(span_done.second);
        }
    } catch (const odeint::step_adjustment_error& e) {
        throw IntegrationError(std::string("step adjustment failed: ") + e.what(), stepper.current_time(),
                               to_vector(stepper.current_state().data()));
    }
    return out;
}

Trajectory integrate(const VectorField& field, const StateVector& x0, double t_end, double tol, double sample_dt) {
    if (!(t_end >= 0.0)) throw DomainError("t_end", "must be non-negative");
    if (!(sample_dt > 0.0)) throw DomainError("sample_dt", "must be positive");
    std::vector<double> times;
    const auto n = static_cast<std::size_t>(std::floor(t_end / sample_dt + 1e-9));
    times.reserve(n + 2);
    for (std::size_t i = 0; i <= n; ++i) times.push_back(static_cast<double>(i) * sample_dt);
    if (t_end - times.back() > 1e-12 * std::max(1.0, t_end)) times.push_back(t_end);
    return integrate(field, x0, times, tol);
}

Trajectory integrate(const DimensionlessSystem& sys, const StateVector& x0, double t_end, double tol,
                     double sample_dt) {
    sys.validate();
    return integrate(VectorField(sys), x0, t_end, tol, sample_dt);
}

StateVector flow(const VectorField& field, const StateVector& x0, double t, double tol) {
    check_tolerance(tol);
    State4 x{x0[0], x0[1], x0[2], x0[3]};
    integrate_exact(PlainSystem{field}, x, t, tol);
    return to_vector(x.data());
}

FlowSensitivities flow_with_sensitivities(const VectorField& field, const StateVector& x0, double t, double tol) {
    check_tolerance(tol);
    State24 s{};
    for (std::size_t i = 0; i < 4; ++i) s[i] = x0[static_cast<Eigen::Index>(i)];
    Eigen::Map<Matrix4>(s.data() + 4).setIdentity();
    integrate_exact(VariationalSystem{field}, s, t, tol);
    FlowSensitivities out;
    out.x = to_vector(s.data());
    out.transition = Eigen::Map<const Matrix4>(s.data() + 4);
    out.d_mu1 = to_vector(s.data() + 20);
    return out;
}

}  // namespace lcoguard
