#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "lcoguard/continuation.hpp"
#include "lcoguard/integrator.hpp"

namespace lcoguard {

/// Absorber with a purely cubic spring and a linear damper.
struct NesConfig {
    double eps = 0.05;
    double Lambda = 1.0;
    double beta3_nes = 0.0;

    void validate() const;
    DimensionlessSystem system(double mu1, double alpha3) const;
};

/// Approximate stability limit mu1max(Lambda) = (eps/2) Lambda / (Lambda^2 + 1).
double nes_mu1_max(double eps, double Lambda);

struct NesBoundary {
    std::vector<double> Lambda;
    std::vector<double> mu1_max;
    double Lambda_at_max = 1.0;
    double global_max = 0.0;  ///< eps / 4, attained at Lambda = 1
};

NesBoundary nes_boundary(double eps, double Lambda_min, double Lambda_max, int count);

enum class Outcome { decays_to_zero, settles_on_lco, inconclusive };

const char* to_string(Outcome o) noexcept;

struct TimeSeriesCase {
    std::string name;  ///< no_absorber, nes or nltva
    Outcome outcome = Outcome::inconclusive;
    double trailing_amplitude = 0.0;
    double horizon = 0.0;
    Trajectory trajectory;  ///< sampled every sample_dt
};

struct ComparisonOptions {
    double window = 200.0;       ///< trailing window length
    double max_horizon = 20000.0;
    double decay_threshold = 1e-5;
    /// Relative change of the window peak |q1| between consecutive windows.
    double drift_tol = 1e-4;
    double tol = 1e-10;
    double sample_dt = 0.1;
    double nes_Lambda = 1.0;
    double nes_beta3 = 0.5333;
};

struct ComparisonReport {
    double eps = 0.0;
    double mu1 = 0.0;
    double alpha3 = 0.0;
    StateVector x0 = StateVector::Zero();
    std::vector<TimeSeriesCase> cases;
};

/// Same primary, three absorbers (none, NES, NLTVA at optimal linear tuning
/// with the compensation rule), common initial state (0.01, 0, 0, 0).
ComparisonReport compare_time_series(double eps, double mu1, double alpha3, const ComparisonOptions& opts = {});

/// Classification of one run; exposed for reuse with other absorbers.
TimeSeriesCase run_case(const std::string& name, const VectorField& field, const StateVector& x0,
                        const ComparisonOptions& opts);

void to_json(nlohmann::json& j, const ComparisonReport& r);

/// Branches for a family of NES designs, one per swept value.
enum class NesSweep { vary_beta3, vary_Lambda };

struct NesBranchResult {
    NesConfig config;
    HopfBranch branch;
};

NesBranchResult nes_branch(const NesConfig& cfg, double alpha3, const ContinuationOptions& opts = {});

std::vector<NesBranchResult> nes_branches(double eps, double alpha3, NesSweep sweep, double fixed,
                                          const std::vector<double>& values, const ContinuationOptions& opts = {});

}  // namespace lcoguard
