#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "lcoguard/core_model.hpp"
#include "lcoguard/hopf_normal_form.hpp"

namespace lcoguard {

using Multipliers = std::array<std::complex<double>, 4>;

/// Non-trivial multipliers must sit inside the unit circle by this margin.
inline constexpr double kStabilityMargin = 1e-8;
/// Allowed distance of the trivial multiplier from 1.
inline constexpr double kTrivialMultiplierTol = 1e-4;

/// Newton on the shooting equations gave up. `residual_history` holds the
/// max-norm residual of every iterate.
class ShootingError : public NumericalError {
public:
    ShootingError(const std::string& what, std::vector<double> history)
        : NumericalError(what + " (last residual " +
                         (history.empty() ? std::string("n/a") : std::to_string(history.back())) + ")"),
          history_(std::move(history)) {}
    const std::vector<double>& residual_history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

struct ShootingOptions {
    double integration_tol = 1e-11;
    double residual_tol = 1e-9;
    int max_newton = 25;
    /// Samples per period used to measure the amplitude.
    int amplitude_samples = 400;
};

/// A converged periodic solution. `x0` lies on the section x2 = 0 unless the
/// section was tangent there, in which case the phase is pinned to the
/// previous orbit.
struct PeriodicOrbit {
    double mu1 = 0.0;
    StateVector x0 = StateVector::Zero();
    double period = 0.0;
    /// max |q1| over one period.
    double amplitude = 0.0;
    /// Sorted by decreasing modulus.
    Multipliers multipliers{};
    /// Index into `multipliers` of the one identified with 1.
    int trivial_index = 0;
    double trivial_deviation = 0.0;
    bool stable = false;
    /// trivial_deviation exceeded kTrivialMultiplierTol.
    bool inaccurate = false;
};

enum class EventKind { hopf, fold, neimark_sacker };

const char* to_string(EventKind k) noexcept;

struct BifurcationEvent {
    EventKind kind = EventKind::fold;
    double mu1 = 0.0;
    double amplitude = 0.0;
    StateVector x0 = StateVector::Zero();
    double period = 0.0;
    /// Distance from the defining condition at the located point: |Re| of
    /// the crossing eigenvalue (hopf), |nontrivial multiplier - 1| (fold),
    /// ||m| - 1| of the crossing pair (neimark_sacker).
    double residual = 0.0;
};

enum class Termination { parameter_range, amplitude_limit, max_points, step_underflow, returned_to_equilibrium,
                         period_limit };

const char* to_string(Termination t) noexcept;

struct ContinuationOptions {
    double mu1_min = -0.02;
    double mu1_max = 0.25;
    double amplitude_max = 10.0;
    double period_max = 500.0;
    double ds_initial = 0.01;
    double ds_min = 1e-6;
    double ds_max = 0.08;
    int max_points = 2000;
    /// Branch ends when the amplitude drops below this after growing past it.
    double amplitude_floor = 1e-3;
    /// Initial amplitude of the seed orbit for branch_from_hopf.
    double seed_amplitude = 0.01;
    double fold_tol = 1e-7;
    ShootingOptions shooting;
};

struct LcoBranch {
    std::vector<PeriodicOrbit> points;
    std::vector<BifurcationEvent> events;
    Termination termination = Termination::max_points;
    std::vector<std::string> warnings;

    std::size_t count(EventKind k) const noexcept;
};

/// Stability of the trivial equilibrium along mu1.
struct EquilibriumBranch {
    std::vector<double> mu1;
    std::vector<int> unstable_pairs;
    std::vector<BifurcationEvent> events;
    /// Two Hopf crossings were found in one grid step.
    bool near_double = false;
};

EquilibriumBranch equilibrium_branch(const DimensionlessSystem& sys, double mu1_min, double mu1_max, int steps);

/// Monodromy matrix and multipliers of `orbit`, with the stability fields filled in.
PeriodicOrbit floquet(const DimensionlessSystem& sys, PeriodicOrbit orbit, const ShootingOptions& opts = {});

/// Newton shooting at fixed mu1 = sys.mu1 from an initial guess.
PeriodicOrbit refine_orbit(const DimensionlessSystem& sys, const StateVector& x0_guess, double period_guess,
                           const ShootingOptions& opts = {});

/// Orbit at mu1_cr + delta_mu1 (on the side given by sign(delta)), seeded by
/// the normal-form estimate.
PeriodicOrbit orbit_from_hopf(const DimensionlessSystem& sys, const HopfPoint& hopf, double delta,
                              double delta_mu1, const ShootingOptions& opts = {});

/// Orbit with q1 = amplitude at the section point; mu1 is an unknown. Works
/// for either criticality and for non-cubic absorbers.
PeriodicOrbit orbit_at_amplitude(const DimensionlessSystem& sys, const HopfPoint& hopf, double amplitude,
                                 const ShootingOptions& opts = {});

/// Integrates through a transient, then refines the settled cycle.
PeriodicOrbit orbit_from_simulation(const DimensionlessSystem& sys, const StateVector& x0, double transient,
                                    const ShootingOptions& opts = {});

/// Pseudo-arclength continuation in mu1 starting from `seed`, heading
/// towards larger amplitude.
LcoBranch continue_branch(const DimensionlessSystem& sys, const PeriodicOrbit& seed,
                          const ContinuationOptions& opts = {});

/// Hopf point of the equilibrium (first loss of stability in mu1), then
/// continuation of the emanating branch.
struct HopfBranch {
    HopfPoint hopf;
    PeriodicOrbit seed;
    LcoBranch branch;
};

HopfBranch branch_from_hopf(const DimensionlessSystem& sys, const ContinuationOptions& opts = {});

enum class AbsorberNonlinearity { linear, quadratic, cubic, quintic };

const char* to_string(AbsorberNonlinearity k) noexcept;

struct SimilarityRow {
    AbsorberNonlinearity kind = AbsorberNonlinearity::cubic;
    double coefficient = 0.0;
    double mu1_cr = 0.0;
    /// From the direction of the branch at the seed: the cycle exists above mu1_cr.
    bool supercritical = false;
    std::size_t folds = 0;
    std::size_t neimark_sacker = 0;
    double max_amplitude = 0.0;
    LcoBranch branch;
};

/// Branch of one absorber nonlinearity (beta2, beta3 or beta5 = coefficient)
/// on the same primary and linear tuning.
SimilarityRow similarity_study(const DimensionlessSystem& base, AbsorberNonlinearity kind, double coefficient,
                               const ContinuationOptions& opts = {});

}  // namespace lcoguard
