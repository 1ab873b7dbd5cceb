#include "lcoguard/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lcoguard/integrator.hpp"
#include "lcoguard/lco_estimate.hpp"
#include "lcoguard/linear_stability.hpp"

namespace lcoguard {

const char* to_string(EventKind k) noexcept {
    switch (k) {
        case EventKind::hopf: return "hopf";
        case EventKind::fold: return "fold";
        case EventKind::neimark_sacker: return "neimark_sacker";
    }
    return "unknown";
}

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::parameter_range: return "parameter_range";
        case Termination::amplitude_limit: return "amplitude_limit";
        case Termination::max_points: return "max_points";
        case Termination::step_underflow: return "step_underflow";
        case Termination::returned_to_equilibrium: return "returned_to_equilibrium";
        case Termination::period_limit: return "period_limit";
    }
    return "unknown";
}

const char* to_string(AbsorberNonlinearity k) noexcept {
    switch (k) {
        case AbsorberNonlinearity::linear: return "linear";
        case AbsorberNonlinearity::quadratic: return "quadratic";
        case AbsorberNonlinearity::cubic: return "cubic";
        case AbsorberNonlinearity::quintic: return "quintic";
    }
    return "unknown";
}

std::size_t LcoBranch::count(EventKind k) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(events.begin(), events.end(), [k](const BifurcationEvent& e) { return e.kind == k; }));
}

namespace {

// Unknowns z = (x0, T, mu1).
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// c^T z = value
struct LinearConstraint {
    Vec6 c = Vec6::Zero();
    double value = 0.0;
};

LinearConstraint fix_component(int i, double value) {
    LinearConstraint l;
    l.c[i] = 1.0;
    l.value = value;
    return l;
}

struct Shot {
    Matrix4 monodromy;
    Mat6 jac;  // rows 4 and 5 hold the constraints of the last solve
    Vec6 residual;
};

Vec6 pack(const StateVector& x0, double period, double mu1) {
    Vec6 z;
    z << x0, period, mu1;
    return z;
}

Shot shoot(const DimensionlessSystem& sys, const Vec6& z, const LinearConstraint& a, const LinearConstraint& b,
           double tol) {
    VectorField field(sys);
    field.set_mu1(z[5]);
    const StateVector x0 = z.head<4>();
    const auto fs = flow_with_sensitivities(field, x0, z[4], tol);
    Shot s;
    s.monodromy = fs.transition;
    s.jac.setZero();
    s.jac.topLeftCorner<4, 4>() = fs.transition - Matrix4::Identity();
    s.jac.block<4, 1>(0, 4) = field(fs.x);
    s.jac.block<4, 1>(0, 5) = fs.d_mu1;
    s.jac.row(4) = a.c.transpose();
    s.jac.row(5) = b.c.transpose();
    s.residual.head<4>() = fs.x - x0;
    s.residual[4] = a.c.dot(z) - a.value;
    s.residual[5] = b.c.dot(z) - b.value;
    return s;
}

struct Solve {
    Vec6 z;
    Shot shot;
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;
};

Solve newton(const DimensionlessSystem& sys, Vec6 z, const LinearConstraint& a, const LinearConstraint& b,
             const ShootingOptions& opts, int max_iter) {
    Solve out;
    out.z = z;
    for (int it = 0; it <= max_iter; ++it) {
        if (!(z[4] > 0.0) || !z.allFinite()) return out;
        Shot s;
        try {
            s = shoot(sys, z, a, b, opts.integration_tol);
        } catch (const NumericalError&) {
            return out;
        }
        out.iterations = it;
        out.residuals.push_back(s.residual.lpNorm<Eigen::Infinity>());
        if (s.residual.lpNorm<Eigen::Infinity>() < opts.residual_tol) {
            out.z = z;
            out.shot = s;
            out.converged = true;
            return out;
        }
        Vec6 dz = s.jac.fullPivLu().solve(-s.residual);
        if (!dz.allFinite()) return out;
        // Keep the period and parameter from jumping to another solution family.
        double scale = 1.0;
        if (std::abs(dz[4]) > 0.25 * z[4]) scale = std::min(scale, 0.25 * z[4] / std::abs(dz[4]));
        if (std::abs(dz[5]) > 0.05) scale = std::min(scale, 0.05 / std::abs(dz[5]));
        z += scale * dz;
    }
    return out;
}

double measure_amplitude(const DimensionlessSystem& sys, const StateVector& x0, double period, double mu1,
                         const ShootingOptions& opts) {
    VectorField field(sys);
    field.set_mu1(mu1);
    const int n = std::max(opts.amplitude_samples, 16);
    std::vector<double> times(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) times[static_cast<std::size_t>(i)] = period * i / n;
    const auto tr = integrate(field, x0, times, std::max(opts.integration_tol, 1e-10));
    double amp = 0.0;
    for (const auto& x : tr.x) amp = std::max(amp, std::abs(x[0]));
    return amp;
}

void fill_floquet(PeriodicOrbit& orbit, const Matrix4& monodromy) {
    Eigen::EigenSolver<Matrix4> es(monodromy, false);
    for (int i = 0; i < 4; ++i) orbit.multipliers[static_cast<std::size_t>(i)] = es.eigenvalues()[i];
    std::sort(orbit.multipliers.begin(), orbit.multipliers.end(), [](const auto& p, const auto& q) {
        if (std::abs(p) != std::abs(q)) return std::abs(p) > std::abs(q);
        return p.imag() > q.imag();
    });
    int trivial = 0;
    for (int i = 1; i < 4; ++i)
        if (std::abs(orbit.multipliers[static_cast<std::size_t>(i)] - 1.0) <
            std::abs(orbit.multipliers[static_cast<std::size_t>(trivial)] - 1.0))
            trivial = i;
    orbit.trivial_index = trivial;
    orbit.trivial_deviation = std::abs(orbit.multipliers[static_cast<std::size_t>(trivial)] - 1.0);
    orbit.inaccurate = orbit.trivial_deviation > kTrivialMultiplierTol;
    orbit.stable = true;
    for (int i = 0; i < 4; ++i)
        if (i != trivial && std::abs(orbit.multipliers[static_cast<std::size_t>(i)]) >= 1.0 - kStabilityMargin)
            orbit.stable = false;
}

PeriodicOrbit make_orbit(const DimensionlessSystem& sys, const Solve& s, const ShootingOptions& opts) {
    PeriodicOrbit orbit;
    orbit.x0 = s.z.head<4>();
    orbit.period = s.z[4];
    orbit.mu1 = s.z[5];
    orbit.amplitude = measure_amplitude(sys, orbit.x0, orbit.period, orbit.mu1, opts);
    fill_floquet(orbit, s.shot.monodromy);
    return orbit;
}

int outside_count(const PeriodicOrbit& o, bool complex_only) {
    int n = 0;
    for (int i = 0; i < 4; ++i) {
        if (i == o.trivial_index) continue;
        const auto& m = o.multipliers[static_cast<std::size_t>(i)];
        if (complex_only && std::abs(m.imag()) <= 1e-6) continue;
        if (std::abs(m) > 1.0) ++n;
    }
    return n;
}

double ns_residual(const PeriodicOrbit& o) {
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i) {
        const auto& m = o.multipliers[static_cast<std::size_t>(i)];
        if (i != o.trivial_index && std::abs(m.imag()) > 1e-6) best = std::min(best, std::abs(std::abs(m) - 1.0));
    }
    return best;
}

double fold_residual(const PeriodicOrbit& o) {
    // The two multipliers closest to 1 are the trivial one and the fold one;
    // their sum is insensitive to how they split near the fold.
    std::array<std::complex<double>, 4> m = o.multipliers;
    std::sort(m.begin(), m.end(), [](const auto& p, const auto& q) { return std::abs(p - 1.0) < std::abs(q - 1.0); });
    return std::abs(m[0] + m[1] - 2.0);
}

LinearConstraint section_phase() { return fix_component(1, 0.0); }

// Poincare section x2 = 0 unless it is nearly tangent to the flow at the
// anchor; then an orbital phase condition against the current point.
LinearConstraint choose_phase(const DimensionlessSystem& sys, const Vec6& z) {
    VectorField field(sys);
    field.set_mu1(z[5]);
    const StateVector x0 = z.head<4>();
    const StateVector f = field(x0);
    if (std::abs(x0[1]) < 1e-6 && std::abs(f[1]) > 0.05 * f.norm()) return section_phase();
    LinearConstraint l;
    l.c.head<4>() = f.normalized();
    l.value = l.c.head<4>().dot(x0);
    return l;
}

Vec6 tangent_from(const Mat6& jac, const Vec6* previous) {
    const Eigen::Matrix<double, 5, 6> j5 = jac.topRows<5>();
    Vec6 t;
    if (previous) {
        Mat6 a;
        a.topRows<5>() = j5;
        a.row(5) = previous->transpose();
        Vec6 rhs = Vec6::Zero();
        rhs[5] = 1.0;
        t = a.fullPivLu().solve(rhs);
        if (!t.allFinite() || t.norm() == 0.0) throw NumericalError("tangent computation failed");
        t.normalize();
        if (t.dot(*previous) < 0.0) t = -t;
    } else {
        Eigen::JacobiSVD<Eigen::Matrix<double, 5, 6>> svd(j5, Eigen::ComputeFullV);
        t = svd.matrixV().col(5);
    }
    return t;
}

struct BranchPoint {
    Vec6 z;
    Vec6 t;
    PeriodicOrbit orbit;
};

// Corrector on the hyperplane t0^T (z - z0) = s, with the tangent there
// oriented along t0.
std::optional<BranchPoint> correct_at(const DimensionlessSystem& sys, const BranchPoint& from, double s,
                                      const LinearConstraint& phase, const ShootingOptions& opts, int max_iter,
                                      int* iterations = nullptr) {
    const Vec6 pred = from.z + s * from.t;
    LinearConstraint arc;
    arc.c = from.t;
    arc.value = from.t.dot(pred);
    const auto solve = newton(sys, pred, phase, arc, opts, max_iter);
    if (iterations) *iterations = solve.iterations;
    if (!solve.converged) return std::nullopt;
    BranchPoint p;
    p.z = solve.z;
    p.t = tangent_from(solve.shot.jac, &from.t);
    p.orbit = make_orbit(sys, solve, opts);
    return p;
}

BifurcationEvent event_at(EventKind kind, const BranchPoint& p, double residual) {
    BifurcationEvent e;
    e.kind = kind;
    e.mu1 = p.orbit.mu1;
    e.amplitude = p.orbit.amplitude;
    e.x0 = p.orbit.x0;
    e.period = p.orbit.period;
    e.residual = residual;
    return e;
}

std::optional<BifurcationEvent> locate_fold(const DimensionlessSystem& sys, const BranchPoint& a,
                                            const BranchPoint& b, const LinearConstraint& phase,
                                            const ContinuationOptions& opts) {
    // Illinois iteration on s -> dmu1/ds along the branch.
    double sa = 0.0, ha = a.t[5];
    double sb = a.t.dot(b.z - a.z), hb = b.t[5];
    std::optional<BranchPoint> best;
    double last_mu1 = b.z[5];
    int side = 0;
    for (int it = 0; it < 60; ++it) {
        const double s = (sa * hb - sb * ha) / (hb - ha);
        auto p = correct_at(sys, a, s, phase, opts.shooting, opts.shooting.max_newton);
        if (!p) break;
        const double h = p->t[5];
        const bool done = std::abs(p->z[5] - last_mu1) < opts.fold_tol && it > 0;
        last_mu1 = p->z[5];
        best = std::move(p);
        if (done || std::abs(sb - sa) < 1e-12) break;
        if ((h > 0.0) == (ha > 0.0)) {
            sa = s;
            ha = h;
            if (side == -1) hb *= 0.5;
            side = -1;
        } else {
            sb = s;
            hb = h;
            if (side == 1) ha *= 0.5;
            side = 1;
        }
    }
    if (!best) return std::nullopt;
    return event_at(EventKind::fold, *best, fold_residual(best->orbit));
}

std::optional<BifurcationEvent> locate_ns(const DimensionlessSystem& sys, const BranchPoint& a, const BranchPoint& b,
                                          const LinearConstraint& phase, const ContinuationOptions& opts) {
    const int n_a = outside_count(a.orbit, false);
    double lo = 0.0, hi = a.t.dot(b.z - a.z);
    std::optional<BranchPoint> at_hi;
    for (int it = 0; it < 30; ++it) {
        const double mid = 0.5 * (lo + hi);
        auto p = correct_at(sys, a, mid, phase, opts.shooting, opts.shooting.max_newton);
        if (!p) break;
        if (outside_count(p->orbit, false) == n_a) {
            lo = mid;
        } else {
            hi = mid;
            at_hi = std::move(p);
        }
    }
    const BranchPoint& located = at_hi ? *at_hi : b;
    return event_at(EventKind::neimark_sacker, located, ns_residual(located.orbit));
}

}  // namespace

EquilibriumBranch equilibrium_branch(const DimensionlessSystem& sys, double mu1_min, double mu1_max, int steps) {
    sys.validate();
    if (!(mu1_max > mu1_min)) throw DomainError("mu1_max", "must exceed mu1_min");
    if (steps < 2) throw DomainError("steps", "must be at least 2");
    const auto pairs_at = [&](double mu1) { return count_unstable_pairs(eigenvalues(sys.with_mu1(mu1))); };

    EquilibriumBranch out;
    for (int i = 0; i <= steps; ++i) {
        const double mu1 = mu1_min + (mu1_max - mu1_min) * i / steps;
        out.mu1.push_back(mu1);
        out.unstable_pairs.push_back(pairs_at(mu1));
    }
    for (std::size_t i = 1; i < out.mu1.size(); ++i) {
        const int from = out.unstable_pairs[i - 1];
        const int to = out.unstable_pairs[i];
        if (from == to) continue;
        if (std::abs(to - from) > 1) out.near_double = true;
        // One bisection per crossed threshold.
        const int lo_count = std::min(from, to);
        for (int threshold = lo_count; threshold < std::max(from, to); ++threshold) {
            double lo = out.mu1[i - 1], hi = out.mu1[i];
            const bool rising = to > from;
            for (int it = 0; it < 80 && hi - lo > 1e-13; ++it) {
                const double mid = 0.5 * (lo + hi);
                const bool past = rising ? pairs_at(mid) > threshold : pairs_at(mid) <= threshold;
                (past ? hi : lo) = mid;
            }
            const double mu1 = 0.5 * (lo + hi);
            BifurcationEvent e;
            e.kind = EventKind::hopf;
            e.mu1 = mu1;
            double res = std::numeric_limits<double>::infinity();
            for (const auto& z : eigenvalues(sys.with_mu1(mu1)))
                if (std::abs(z.imag()) > kMarginalBand) res = std::min(res, std::abs(z.real()));
            e.residual = res;
            out.events.push_back(e);
        }
    }
    return out;
}

PeriodicOrbit floquet(const DimensionlessSystem& sys, PeriodicOrbit orbit, const ShootingOptions& opts) {
    VectorField field(sys);
    field.set_mu1(orbit.mu1);
    const auto fs = flow_with_sensitivities(field, orbit.x0, orbit.period, opts.integration_tol);
    fill_floquet(orbit, fs.transition);
    return orbit;
}

PeriodicOrbit refine_orbit(const DimensionlessSystem& sys, const StateVector& x0_guess, double period_guess,
                           const ShootingOptions& opts) {
    sys.validate();
    if (!(period_guess > 0.0)) throw DomainError("period", "must be positive");
    const auto solve = newton(sys, pack(x0_guess, period_guess, sys.mu1), section_phase(),
                              fix_component(5, sys.mu1), opts, opts.max_newton);
    if (!solve.converged) throw ShootingError("shooting did not converge", solve.residuals);
    return make_orbit(sys, solve, opts);
}

PeriodicOrbit orbit_from_hopf(const DimensionlessSystem& sys, const HopfPoint& hopf, double delta,
                              double delta_mu1, const ShootingOptions& opts) {
    if (!(delta_mu1 > 0.0)) throw DomainError("delta_mu1", "must be positive");
    if (classify(delta) == Criticality::degenerate) throw NumericalError("degenerate Hopf point");
    const double side = (delta < 0.0) == (hopf.sigma_slope > 0.0) ? 1.0 : -1.0;
    const double mu1 = hopf.mu1_cr + side * delta_mu1;
    const auto est = lco_amplitude_local(hopf, delta, mu1);
    if (!est.valid) throw NumericalError("no local cycle on this side of the Hopf point");
    const double phi = std::atan2(hopf.T(0, 1), hopf.T(0, 0));
    const StateVector x0 = est.r * (hopf.T.col(0) * std::cos(phi) + hopf.T.col(1) * std::sin(phi));
    const auto orbit = refine_orbit(sys.with_mu1(mu1), x0, 2.0 * std::numbers::pi / hopf.omega1, opts);
    if (orbit.amplitude < 0.2 * est.q1_max) throw NumericalError("shooting collapsed onto the equilibrium");
    return orbit;
}

PeriodicOrbit orbit_at_amplitude(const DimensionlessSystem& sys, const HopfPoint& hopf, double amplitude,
                                 const ShootingOptions& opts) {
    sys.validate();
    if (!(amplitude > 0.0)) throw DomainError("amplitude", "must be positive");
    const double scale = std::hypot(hopf.T(0, 0), hopf.T(0, 1));
    const double r = amplitude / scale;
    const double phi = std::atan2(hopf.T(0, 1), hopf.T(0, 0));
    StateVector x0 = r * (hopf.T.col(0) * std::cos(phi) + hopf.T.col(1) * std::sin(phi));
    x0[1] = 0.0;
    double mu1 = hopf.mu1_cr;
    if (sys.beta2 == 0.0 && hopf.sigma_slope != 0.0) {
        try {
            const auto nf = normal_form(sys, hopf);
            if (nf.criticality != Criticality::degenerate) mu1 -= nf.delta * r * r / hopf.sigma_slope;
        } catch (const std::exception&) {
        }
    }
    const auto solve = newton(sys, pack(x0, 2.0 * std::numbers::pi / hopf.omega1, mu1), section_phase(),
                              fix_component(0, amplitude), opts, opts.max_newton);
    if (!solve.converged) throw ShootingError("shooting at fixed amplitude did not converge", solve.residuals);
    return make_orbit(sys, solve, opts);
}

PeriodicOrbit orbit_from_simulation(const DimensionlessSystem& sys, const StateVector& x0, double transient,
                                    const ShootingOptions& opts) {
    sys.validate();
    if (!(transient > 0.0)) throw DomainError("transient", "must be positive");
    VectorField field(sys);
    const StateVector settled = flow(field, x0, transient, std::max(opts.integration_tol, 1e-10));
    if (settled.norm() < 1e-6) throw NumericalError("trajectory settled on the equilibrium");
    // Find two successive maxima of q1 (x2 crossing zero downwards).
    const double dt = 0.005;
    const auto tr = integrate(field, settled, 200.0, std::max(opts.integration_tol, 1e-10), dt);
    std::vector<std::pair<double, StateVector>> crossings;
    for (std::size_t i = 1; i < tr.x.size() && crossings.size() < 3; ++i) {
        const double a = tr.x[i - 1][1], b = tr.x[i][1];
        if (a > 0.0 && b <= 0.0) {
            const double w = a / (a - b);
            crossings.emplace_back(tr.t[i - 1] + w * dt, tr.x[i - 1] + w * (tr.x[i] - tr.x[i - 1]));
        }
    }
    if (crossings.size() < 3) throw NumericalError("no oscillation found after the transient");
    const double period = crossings[2].first - crossings[1].first;
    return refine_orbit(sys, crossings[2].second, period, opts);
}

LcoBranch continue_branch(const DimensionlessSystem& sys, const PeriodicOrbit& seed, const ContinuationOptions& opts) {
    sys.validate();
    if (!(opts.ds_min > 0.0 && opts.ds_max >= opts.ds_min && opts.ds_initial >= opts.ds_min))
        throw DomainError("ds", "need 0 < ds_min <= ds_initial, ds_max");
    if (!(opts.mu1_max > opts.mu1_min)) throw DomainError("mu1_max", "must exceed mu1_min");
    const auto& sh = opts.shooting;

    LcoBranch branch;
    BranchPoint cur;
    cur.z = pack(seed.x0, seed.period, seed.mu1);
    {
        const auto phase = choose_phase(sys, cur.z);
        const auto solve = newton(sys, cur.z, phase, fix_component(5, seed.mu1), sh, sh.max_newton);
        if (!solve.converged) throw NumericalError("seed orbit is not a periodic solution");
        cur.z = solve.z;
        cur.t = tangent_from(solve.shot.jac, nullptr);
        // Head towards larger |q1| at the anchor.
        if (cur.t[0] * cur.z[0] < 0.0) cur.t = -cur.t;
        cur.orbit = make_orbit(sys, solve, sh);
    }
    branch.points.push_back(cur.orbit);

    double ds = opts.ds_initial;
    bool grew_past_floor = cur.orbit.amplitude > 2.0 * opts.amplitude_floor;
    while (true) {
        if (static_cast<int>(branch.points.size()) >= opts.max_points) {
            branch.termination = Termination::max_points;
            break;
        }
        const auto phase = choose_phase(sys, cur.z);
        int iterations = 0;
        std::optional<BranchPoint> next;
        try {
            next = correct_at(sys, cur, ds, phase, sh, 8, &iterations);
        } catch (const NumericalError&) {
            next.reset();
        }
        // Reject sharp turns: they usually mean a jump onto another sheet.
        if (next && next->t.dot(cur.t) < 0.9) next.reset();
        if (!next) {
            ds *= 0.5;
            if (ds < opts.ds_min) {
                branch.termination = Termination::step_underflow;
                break;
            }
            continue;
        }

        if (cur.t[5] * next->t[5] < 0.0) {
            if (auto e = locate_fold(sys, cur, *next, phase, opts)) branch.events.push_back(*e);
        }
        const int out_a = outside_count(cur.orbit, false), out_b = outside_count(next->orbit, false);
        const int cx_a = outside_count(cur.orbit, true), cx_b = outside_count(next->orbit, true);
        if (std::abs(out_b - out_a) == 2 && cx_a != cx_b) {
            if (auto e = locate_ns(sys, cur, *next, phase, opts)) branch.events.push_back(*e);
        }
        if (next->orbit.inaccurate)
            branch.warnings.push_back("trivial multiplier off by " + std::to_string(next->orbit.trivial_deviation) +
                                      " at mu1 = " + std::to_string(next->orbit.mu1));

        cur = std::move(*next);
        branch.points.push_back(cur.orbit);

        if (iterations <= 3) ds = std::min(ds * 1.5, opts.ds_max);
        else if (iterations >= 6) ds = std::max(ds * 0.7, opts.ds_min);

        const auto& o = cur.orbit;
        if (o.mu1 < opts.mu1_min || o.mu1 > opts.mu1_max) {
            branch.termination = Termination::parameter_range;
            break;
        }
        if (o.amplitude > opts.amplitude_max) {
            branch.termination = Termination::amplitude_limit;
            break;
        }
        if (o.period > opts.period_max) {
            branch.termination = Termination::period_limit;
            break;
        }
        if (o.amplitude > 2.0 * opts.amplitude_floor) grew_past_floor = true;
        if (grew_past_floor && o.amplitude < opts.amplitude_floor) {
            branch.termination = Termination::returned_to_equilibrium;
            break;
        }
    }
    return branch;
}

HopfBranch branch_from_hopf(const DimensionlessSystem& sys, const ContinuationOptions& opts) {
    sys.validate();
    HopfBranch out;
    double mu1_cr = 0.0;
    if (!sys.is_nes()) {
        mu1_cr = critical_mu1(sys.eps, sys.mu2, sys.gamma);
        if (!(mu1_cr > 0.0)) throw NumericalError("equilibrium is already unstable at mu1 = 0");
    } else {
        const auto eq = equilibrium_branch(sys, 0.0, opts.mu1_max, 500);
        if (eq.events.empty()) throw NumericalError("no Hopf point below mu1_max");
        mu1_cr = eq.events.front().mu1;
    }
    out.hopf = hopf_point_at(sys.with_mu1(mu1_cr));
    out.seed = orbit_at_amplitude(sys, out.hopf, opts.seed_amplitude, opts.shooting);
    out.branch = continue_branch(sys, out.seed, opts);
    BifurcationEvent h;
    h.kind = EventKind::hopf;
    h.mu1 = mu1_cr;
    h.period = 2.0 * std::numbers::pi / out.hopf.omega1;
    h.residual = std::abs(out.hopf.sigma);
    out.branch.events.insert(out.branch.events.begin(), h);
    return out;
}

SimilarityRow similarity_study(const DimensionlessSystem& base, AbsorberNonlinearity kind, double coefficient,
                               const ContinuationOptions& opts) {
    auto sys = base;
    sys.beta2 = sys.beta3 = sys.beta5 = 0.0;
    switch (kind) {
        case AbsorberNonlinearity::linear: break;
        case AbsorberNonlinearity::quadratic: sys.beta2 = coefficient; break;
        case AbsorberNonlinearity::cubic: sys.beta3 = coefficient; break;
        case AbsorberNonlinearity::quintic: sys.beta5 = coefficient; break;
    }
    const auto hb = branch_from_hopf(sys, opts);
    SimilarityRow row;
    row.kind = kind;
    row.coefficient = coefficient;
    row.mu1_cr = hb.hopf.mu1_cr;
    row.supercritical = hb.seed.mu1 > hb.hopf.mu1_cr;
    row.folds = hb.branch.count(EventKind::fold);
    row.neimark_sacker = hb.branch.count(EventKind::neimark_sacker);
    for (const auto& p : hb.branch.points) row.max_amplitude = std::max(row.max_amplitude, p.amplitude);
    row.branch = hb.branch;
    return row;
}

}  // namespace lcoguard
